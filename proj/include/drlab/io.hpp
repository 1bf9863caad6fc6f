#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "drlab/analysis.hpp"
#include "drlab/evolution.hpp"
#include "drlab/pathcalc.hpp"
#include "drlab/treesim.hpp"

namespace drlab::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal, locale independent.
std::string shortest(double v);

/// A probability written as "p/q", a decimal string, or a JSON number.
Rational parse_probability(const json& j);

SystemSpec spec_from_json(const json& j);
json spec_to_json(const SystemSpec& spec);
SystemSpec read_spec_file(const std::string& path);

template <class T>
json pmf_to_json(const Pmf<T>& p) {
    json atoms = json::array();
    const auto vals = p.atoms();
    for (const auto& [x, v] : vals) {
        json a;
        a["x"] = x;
        if constexpr (std::is_same_v<T, double>)
            a["p"] = v;
        else
            a["p"] = format_number(v);
        atoms.push_back(a);
    }
    return json{{"atoms", atoms}, {"mode", mode_name(NumTraits<T>::mode)}};
}

json phase_to_json(const PhaseReport& r);
json residual_to_json(const ResidualReport& r);
json openpath_to_json(const OpenPathReport& r);
json inequality_to_json(const InequalityReport& r, bool include_rows);
json fit_to_json(const FitResult& r, const std::string& statistic);
json scaling_summary_json(const ScalingReport& r);
json tree_to_json(const TreeSample& t);
json coupling_to_json(const CouplingReport& r);

template <class T>
void write_trace_csv(std::ostream& os, const GenerationTrace<T>& trace);

void write_scaling_csv(std::ostream& os, const ScalingReport& r);
void write_mc_csv(std::ostream& os, const std::vector<McEstimate>& est);
void write_comparison_csv(std::ostream& os, const std::vector<McComparison>& cmp);

/// Reads "n,value" rows (header optional, extra columns ignored) or a trace
/// CSV, picking the named column.
Series read_series_csv(const std::string& path, const std::string& column);

} // namespace drlab::io
