#pragma once
// Report assembly and serialization. Reports are JSON documents with sorted
// keys and 17 significant digits for every double, so identical runs give
// byte-identical files.

#include "adiabat/diagnostics.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace adiabat::report {

using Json = nlohmann::json;
using Pair = std::pair<std::size_t, std::size_t>;
using num::Complex;

// Section toggles; an empty set enables everything.
inline const std::vector<std::string> kSections{"traditional_metric", "errors",        "zero_counts", "fourier",
                                                "min_time",           "probabilities", "drift"};

struct Options {
    std::vector<Pair> pairs; // empty: default policy, see default_pairs
    std::size_t tracked_level = 0;
    std::set<std::string> sections;
    double phase_guard = diag::kQuadraturePhaseGuard;
    double cutoff_fraction = diag::kDefaultCutoffFraction;
    double gap_tolerance = diag::kDefaultGapTolerance;
    std::size_t min_time_s_steps = 1000;
    double min_time_multiplier = 10.0;

    bool enabled(const std::string& section) const { return sections.empty() || sections.count(section) > 0; }
};

// All ordered pairs for dim <= 8, otherwise only pairs touching the tracked level.
std::vector<Pair> default_pairs(std::size_t dim, std::size_t tracked_level);

struct Inputs {
    const HamiltonianModel& model;
    const diag::SpectrumPath& path;
    const propagate::EvolutionTrace& trace;
};

// Everything the run produced, already in serializable form.
Json assemble(const Inputs& in, const Options& opts);

// Per-pair scalars used by sweeps (pair must be nondegenerate).
struct PairSummary {
    double max_a_frozen = 0.0;
    double max_a_live = 0.0;
    Complex eps;
    Complex direct; // a_m(T) - a_m(0); equals -eps for a two-level system
    diag::ZeroCount zeros;
    double bound = 0.0;
    diag::Cutoff cutoff;
    double dominant = 0.0;
    double metric = 0.0;
};
PairSummary summarize_pair(const Inputs& in, const diag::AmplitudePath& amp, std::size_t n, std::size_t m,
                           const Options& opts);

// Deterministic text form: sorted keys, two-space indent, %.17g doubles, LF.
std::string dump(const Json& doc);

// Columns: t, P_0..P_{d-1}, |a_0|..|a_{d-1}|, Re/Im A_nm (live) per pair.
// Every stride-th row plus the final one.
void write_timeseries(std::ostream& out, const Inputs& in, const std::vector<Pair>& pairs, std::size_t stride);

std::string format_double(double x);

} // namespace adiabat::report
