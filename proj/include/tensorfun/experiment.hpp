#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tensorfun/bfomfom.hpp"
#include "tensorfun/netcomm.hpp"

namespace tensorfun {

/// Which operator the Krylov method sees: bcirc(A) on E_1, or the block
/// diagonal Fourier faces D on (F_p (x) I_n) E_1.
enum class OperatorCase { bcirc, fourier };

std::string to_string(OperatorCase c);
OperatorCase parse_operator_case(const std::string& name);

struct ExperimentConfig {
    Index n = 50;
    Index p = 50;
    double density = 0.1;
    std::uint64_t seed = 1;
    std::vector<int> m_values{5};
    double tol = 1e-12;
    std::vector<InnerProductKind> schemes{InnerProductKind::classical,
                                          InnerProductKind::global};
    std::vector<OperatorCase> cases{OperatorCase::bcirc, OperatorCase::fourier};
    int max_cycles = 50;

    /// Throws ValidationError on tol <= 0, m < 1 or empty lists.
    void validate() const;
};

struct ConvergenceRow {
    int cycle;
    InnerProductKind scheme;
    OperatorCase op_case;
    int m;
    double update_norm;
    double true_rel_error;
    int quadrature_nodes;
    double wall_time_ms;
};

struct ConvergenceSummary {
    InnerProductKind scheme;
    OperatorCase op_case;
    int m;
    RestartStatus status;
    /// Cycles run before the method stopped.
    int cycles;
    /// First cycle whose true relative error is <= tol, or -1.
    int cycles_to_tol;
    double final_true_error;
    double mean_cycle_ms;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ConvergenceRow> rows;
    std::vector<ConvergenceSummary> summary;

    const ConvergenceSummary* find(InnerProductKind scheme, OperatorCase op_case, int m) const;
};

/// exp(A) * I for the seeded network tensor of `config`, every (scheme,
/// case, m) combination, with per-cycle true errors against the facewise
/// oracle.
ExperimentReport run_convergence_experiment(const ExperimentConfig& config);

/// Same, on a caller-supplied tensor.
ExperimentReport run_convergence_experiment(const ExperimentConfig& config, const Tensor3& a);

/// cycle,scheme,case,m,update_norm,true_rel_error,quadrature_nodes,wall_time_ms
void write_convergence_csv(std::ostream& out, const ExperimentReport& report);
/// scheme,case,m,status,cycles,cycles_to_tol,final_true_error,mean_cycle_ms
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
/// Cycles-to-converge grid, schemes by m, for one operator case; failed
/// runs show their status ("saturated", "not_converged").
std::string format_cycle_table(const ExperimentReport& report, OperatorCase op_case);
/// Static SVG of true relative error against cycle (log scale) for one m.
void write_svg_plot(std::ostream& out, const ExperimentReport& report, int m);

struct BenchmarkRow {
    InnerProductKind scheme;
    int m;
    int cycles;
    double per_cycle_ms;
};

struct ApplyTiming {
    Index n;
    Index p;
    double ms;
};

struct BenchmarkReport {
    Index n = 0;
    Index p = 0;
    std::vector<BenchmarkRow> cycles;
    std::vector<ApplyTiming> apply;
    /// Least-squares slope of log(time) against log(n) for apply_bcirc.
    double apply_slope = 0.0;
    bool global_faster = false;
};

/// Per-cycle wall time of classical vs. global restarted B(FOM)^2 on the
/// bcirc operator (first m of the config), and apply_bcirc timings for
/// n in apply_sizes at fixed p.
BenchmarkReport run_benchmark(const ExperimentConfig& config,
                              const std::vector<Index>& apply_sizes = {16, 32, 64});

/// scheme,n,p,m,cycles,per_cycle_ms rows, then a n,p,apply_ms section.
void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report);

struct Triple {
    Index i, j, k;
};

struct CommunicabilityReport {
    Index nodes = 0;
    Index layers = 0;
    std::vector<Communicability::Ranked> top;
    std::vector<std::pair<Triple, double>> triples;
};

/// Top-k centralities and the requested (0-based) triples of an adjacency
/// tensor file.
CommunicabilityReport report_communicability(const std::filesystem::path& path, int top_k,
                                             Backend backend,
                                             const std::vector<Triple>& triples = {});

/// rank,node,centrality rows, then i,j,k,communicability rows (1-based).
void write_communicability_csv(std::ostream& out, const CommunicabilityReport& report);

}  // namespace tensorfun
