#include "tensorfun/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tensorfun/spectral.hpp"
#include "tensorfun/tensor_io.hpp"

namespace tensorfun {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double x) { return format_double(x); }

RestartResult run_restart(const ScalarFunction& f, const BlockOperator& op,
                          const BlockVector& b, const InnerProductScheme& scheme,
                          const RestartOptions& options) {
    try {
        return restarted_bfomfom(f, op, b, scheme, options);
    } catch (const QuadratureSaturationError& e) {
        RestartResult r = e.partial();
        r.status = RestartStatus::quadrature_saturated;
        return r;
    } catch (const NonConvergenceError& e) {
        RestartResult r = e.partial();
        r.status = RestartStatus::not_converged;
        return r;
    }
}

}  // namespace

std::string to_string(OperatorCase c) { return c == OperatorCase::bcirc ? "bcirc" : "fourier"; }

OperatorCase parse_operator_case(const std::string& name) {
    if (name == "bcirc" || name == "B")
        return OperatorCase::bcirc;
    if (name == "fourier" || name == "D" || name == "A")
        return OperatorCase::fourier;
    throw ValidationError("unknown operator case '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (!(tol > 0.0))
        throw ValidationError("tol must be positive");
    if (m_values.empty() || schemes.empty() || cases.empty())
        throw ValidationError("m, scheme and case lists must be nonempty");
    for (int m : m_values)
        if (m < 1)
            throw ValidationError("m must be at least 1");
    if (n < 2 || p < 1)
        throw ValidationError("need n >= 2 and p >= 1");
    if (max_cycles < 1)
        throw ValidationError("max_cycles must be positive");
}

const ConvergenceSummary* ExperimentReport::find(InnerProductKind scheme, OperatorCase op_case,
                                                 int m) const {
    for (const auto& s : summary)
        if (s.scheme == scheme && s.op_case == op_case && s.m == m)
            return &s;
    return nullptr;
}

ExperimentReport run_convergence_experiment(const ExperimentConfig& config) {
    config.validate();
    const AdjacencyTensor a =
        random_network_tensor(config.n, config.p, config.density, config.seed);
    return run_convergence_experiment(config, a.tensor());
}

ExperimentReport run_convergence_experiment(const ExperimentConfig& config, const Tensor3& a) {
    config.validate();
    const Index n = a.rows(), p = a.depth();
    const ScalarFunction f = ScalarFunction::exp();
    const Tensor3 oracle = t_function_facewise(f, a, identity_tensor(n, p));
    const double oracle_norm = oracle.frobenius_norm();

    const BcircOperator bcirc_op(a);
    const FourierFaceOperator fourier_op(face_diagonalize(a));
    const BlockVector e1 = block_unit_vector(1, n, p);
    const BlockVector e1_hat = to_fourier(e1);

    ExperimentReport report;
    report.config = config;
    for (int m : config.m_values)
        for (OperatorCase op_case : config.cases)
            for (InnerProductKind kind : config.schemes) {
                const bool fourier = op_case == OperatorCase::fourier;
                const BlockOperator op = fourier
                    ? BlockOperator([&](const BlockVector& x) { return fourier_op(x); })
                    : BlockOperator([&](const BlockVector& x) { return bcirc_op(x); });

                RestartOptions options;
                options.m = m;
                options.tol = config.tol;
                options.max_cycles = config.max_cycles;
                options.arnoldi.operator_norm =
                    fourier ? fourier_op.frobenius_norm() : bcirc_op.frobenius_norm();
                options.observer = [&](CycleRecord& rec, const BlockVector& approx) {
                    const Tensor3 x = fold(fourier ? from_fourier(approx) : approx, p);
                    rec.true_relative_error = (x - oracle).frobenius_norm() / oracle_norm;
                };

                const InnerProductScheme scheme(kind, n);
                const RestartResult r =
                    run_restart(f, op, fourier ? e1_hat : e1, scheme, options);

                ConvergenceSummary s{kind, op_case, m, r.status, r.cycles(), -1, 0.0, 0.0};
                for (const auto& rec : r.history) {
                    report.rows.push_back({rec.cycle, kind, op_case, m, rec.update_norm,
                                           rec.true_relative_error, rec.quadrature_nodes,
                                           rec.wall_time_ms});
                    if (s.cycles_to_tol < 0 && rec.true_relative_error <= config.tol)
                        s.cycles_to_tol = rec.cycle;
                    s.mean_cycle_ms += rec.wall_time_ms;
                }
                if (!r.history.empty()) {
                    s.final_true_error = r.history.back().true_relative_error;
                    s.mean_cycle_ms /= static_cast<double>(r.history.size());
                }
                report.summary.push_back(s);
            }
    return report;
}

void write_convergence_csv(std::ostream& out, const ExperimentReport& report) {
    out << "cycle,scheme,case,m,update_norm,true_rel_error,quadrature_nodes,wall_time_ms\n";
    for (const auto& r : report.rows)
        out << r.cycle << ',' << to_string(r.scheme) << ',' << to_string(r.op_case) << ','
            << r.m << ',' << num(r.update_norm) << ',' << num(r.true_rel_error) << ','
            << r.quadrature_nodes << ',' << num(r.wall_time_ms) << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    out << "scheme,case,m,status,cycles,cycles_to_tol,final_true_error,mean_cycle_ms\n";
    for (const auto& s : report.summary)
        out << to_string(s.scheme) << ',' << to_string(s.op_case) << ',' << s.m << ','
            << to_string(s.status) << ',' << s.cycles << ',' << s.cycles_to_tol << ','
            << num(s.final_true_error) << ',' << num(s.mean_cycle_ms) << '\n';
}

std::string format_cycle_table(const ExperimentReport& report, OperatorCase op_case) {
    std::ostringstream os;
    os << "case " << to_string(op_case) << ": cycles to converge to "
       << num(report.config.tol) << '\n';
    os << "scheme    ";
    for (int m : report.config.m_values)
        os << " | m=" << m << std::string(m < 10 ? 9 : 8, ' ');
    os << '\n';
    for (InnerProductKind kind : report.config.schemes) {
        std::string name = to_string(kind);
        name.resize(10, ' ');
        os << name;
        for (int m : report.config.m_values) {
            const auto* s = report.find(kind, op_case, m);
            std::string cell = !s ? "-"
                               : s->status == RestartStatus::converged
                                   ? std::to_string(s->cycles)
                                   : to_string(s->status);
            cell.resize(12, ' ');
            os << " | " << cell;
        }
        os << '\n';
    }
    return os.str();
}

void write_svg_plot(std::ostream& out, const ExperimentReport& report, int m) {
    constexpr double width = 640, height = 400, margin = 50;
    std::map<std::string, std::vector<std::pair<int, double>>> series;
    int max_cycle = 1;
    double lo = 0.0, hi = -16.0;
    for (const auto& r : report.rows) {
        if (r.m != m || !(r.true_rel_error > 0.0))
            continue;
        const double y = std::log10(r.true_rel_error);
        series[to_string(r.scheme) + "/" + to_string(r.op_case)].push_back({r.cycle, y});
        max_cycle = std::max(max_cycle, r.cycle);
        lo = std::min(lo, std::floor(y));
        hi = std::max(hi, std::ceil(y));
    }
    if (hi <= lo)
        hi = lo + 1;
    auto px = [&](double c) {
        return margin + (c - 1) / std::max(1, max_cycle - 1) * (width - 2 * margin);
    };
    auto py = [&](double y) { return margin + (hi - y) / (hi - lo) * (height - 2 * margin); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">relative error, m = "
        << m << "</text>\n";
    for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += 2) {
        out << "<line x1=\"" << margin << "\" x2=\"" << width - margin << "\" y1=\"" << py(e)
            << "\" y2=\"" << py(e) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << margin - 5 << "\" y=\"" << py(e) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
    }
    for (int c = 1; c <= max_cycle; ++c)
        out << "<text x=\"" << px(c) << "\" y=\"" << height - margin + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << c << "</text>\n";
    std::size_t idx = 0;
    for (const auto& [name, pts] : series) {
        const char* color = colors[idx % 4];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [c, y] : pts)
            out << px(c) << ',' << py(y) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - margin - 120 << "\" y=\"" << margin + 16 * (idx + 1)
            << "\" fill=\"" << color << "\" font-size=\"12\">" << name << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

BenchmarkReport run_benchmark(const ExperimentConfig& config,
                              const std::vector<Index>& apply_sizes) {
    config.validate();
    BenchmarkReport report;
    report.n = config.n;
    report.p = config.p;
    const Tensor3 a =
        random_network_tensor(config.n, config.p, config.density, config.seed).tensor();
    const BcircOperator op(a);
    const BlockOperator apply = [&op](const BlockVector& x) { return op(x); };
    const BlockVector e1 = block_unit_vector(1, config.n, config.p);
    const int m = config.m_values.front();

    for (InnerProductKind kind : {InnerProductKind::classical, InnerProductKind::global}) {
        RestartOptions options;
        options.m = m;
        options.tol = config.tol;
        options.max_cycles = config.max_cycles;
        options.arnoldi.operator_norm = op.frobenius_norm();
        const RestartResult r = run_restart(ScalarFunction::exp(), apply, e1,
                                            InnerProductScheme(kind, config.n), options);
        double total = 0.0;
        for (const auto& rec : r.history)
            total += rec.wall_time_ms;
        report.cycles.push_back(
            {kind, m, r.cycles(), r.history.empty() ? 0.0 : total / r.cycles()});
    }
    report.global_faster = report.cycles[1].per_cycle_ms < report.cycles[0].per_cycle_ms;

    std::vector<double> xs, ys;
    for (Index n : apply_sizes) {
        const Tensor3 t = random_network_tensor(n, config.p, config.density, config.seed).tensor();
        const BcircOperator top(t);
        const BlockVector x = block_unit_vector(1, n, config.p);
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            const auto start = Clock::now();
            const BlockVector y = top(x);
            const double ms =
                std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            if (y.rows() != x.rows())
                throw Error("run_benchmark: apply returned the wrong shape");
            best = std::min(best, ms);
        }
        report.apply.push_back({n, config.p, best});
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(best, 1e-6)));
    }
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        report.apply_slope = sxy / sxx;
    }
    return report;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "scheme,n,p,m,cycles,per_cycle_ms\n";
    for (const auto& r : report.cycles)
        out << to_string(r.scheme) << ',' << report.n << ',' << report.p << ',' << r.m << ','
            << r.cycles << ',' << num(r.per_cycle_ms) << '\n';
    out << "n,p,apply_ms\n";
    for (const auto& t : report.apply)
        out << t.n << ',' << t.p << ',' << num(t.ms) << '\n';
}

CommunicabilityReport report_communicability(const std::filesystem::path& path, int top_k,
                                             Backend backend,
                                             const std::vector<Triple>& triples) {
    if (top_k < 0)
        throw ValidationError("top_k must be nonnegative");
    const AdjacencyTensor a(load_tensor(path));
    const Communicability comm(a, backend);
    CommunicabilityReport report;
    report.nodes = a.nodes();
    report.layers = a.layers();
    auto ranked = comm.ranking();
    ranked.resize(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(top_k)));
    report.top = std::move(ranked);
    for (const auto& t : triples)
        report.triples.push_back({t, comm.at(t.i, t.j, t.k)});
    return report;
}

void write_communicability_csv(std::ostream& out, const CommunicabilityReport& report) {
    out << "rank,node,centrality\n";
    for (std::size_t r = 0; r < report.top.size(); ++r)
        out << r + 1 << ',' << report.top[r].node + 1 << ',' << num(report.top[r].value)
            << '\n';
    if (report.triples.empty())
        return;
    out << "i,j,k,communicability\n";
    for (const auto& [t, v] : report.triples)
        out << t.i + 1 << ',' << t.j + 1 << ',' << t.k + 1 << ',' << num(v) << '\n';
}

}  // namespace tensorfun
