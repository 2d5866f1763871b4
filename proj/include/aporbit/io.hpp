#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "aporbit/analysis.hpp"
#include "aporbit/armodel.hpp"
#include "aporbit/maps.hpp"
#include "aporbit/orbit.hpp"
#include "aporbit/spectral.hpp"

namespace aporbit::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parses a file, throwing ConfigError on I/O or syntax problems.
json read_json_file(const std::filesystem::path& path);

/// {"d": int, "kind": "ar"|"expr"|"delay"|"builtin", "p": [...] | "exprs": [...]
///  | "builtin": name with "params": [...], optional "name"}.
MapDefinition map_from_json(const json& j);
json map_to_json(const MapDefinition& map);

/// {"p": [...], "z0": [z(0), z(-1), ..., z(-d+1)]}.
ARSpec ar_spec_from_json(const json& j);
json ar_spec_to_json(const ARSpec& spec);

json to_json(const Point& p);
json to_json(const GridState& s);
json to_json(const GridSpec& g);

json chain_summary(const ChainResult& chain, const TransitionTable& table);
json trig_to_json(const TrigForm& form);
json bound_to_json(const BoundReport& rep);
json ladder_to_json(const TailReport& tail, const ConditionReport& cond, double gamma,
                    LipschitzMode gamma_method);
json decomposition_to_json(const ARDecomposition& dec, const DecompositionCheck& check);
json census_to_json(const CensusReport& rep);
json range_to_json(const RangeReport& rep);

/// "%.17g"
std::string format_double(double v);

/// t, y_1..y_d, ybar_1..ybar_d, ystar_1..ystar_d
std::string orbit_csv(const PipelineResult& run, const GridSpec& grid);
std::string bound_csv(const BoundReport& rep);
std::string trig_curve_csv(const TrigForm& form, long long t_begin, long long t_end);
std::string ar_curve_csv(const ARSpec& spec, const ARDecomposition& dec, std::size_t horizon);
std::string census_csv(const CensusReport& rep);

/// Writes files under a directory, refusing to overwrite unless forced.
class OutputDir {
public:
    OutputDir(std::filesystem::path dir, bool force);

    /// Throws ConfigError when the target exists and force is off.
    void check_writable(const std::string& name) const;
    std::filesystem::path write(const std::string& name, const std::string& content) const;
    std::filesystem::path write_json(const std::string& name, const json& j) const;

private:
    std::filesystem::path dir_;
    bool force_;
};

}  // namespace aporbit::io
