// tensorfun: command-line front end for tensor t-functions.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tensorfun/experiment.hpp"
#include "tensorfun/netcomm.hpp"
#include "tensorfun/tensor_io.hpp"
#include "tensorfun/tfunc.hpp"

namespace tf = tensorfun;

namespace {

enum ExitCode { ok = 0, failure = 1, invalid = 2, not_converged = 3, saturated = 4 };

struct Common {
    tf::Index n = 50;
    tf::Index p = 50;
    double density = 0.1;
    std::uint64_t seed = 1;
    std::vector<int> m{5};
    double tol = 1e-12;
    std::vector<std::string> scheme{"classical", "global"};
    std::vector<std::string> op_case{"bcirc", "fourier"};
    std::string backend = "auto";
    int max_cycles = 50;
    int max_nodes = 4096;
    std::string out;
};

void add_size_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--n", c.n, "nodes per layer")->capture_default_str();
    cmd->add_option("--p", c.p, "number of layers (frontal slices)")->capture_default_str();
    cmd->add_option("--density", c.density, "edge probability")->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_krylov_flags(CLI::App* cmd, Common& c, bool lists) {
    if (lists) {
        cmd->add_option("--m", c.m, "restart lengths")->capture_default_str();
        cmd->add_option("--scheme", c.scheme, "classical and/or global")->capture_default_str();
    } else {
        c.m.assign(1, 5);
        c.scheme.assign(1, "classical");
        cmd->add_option("--m", c.m, "restart length")->expected(1)->capture_default_str();
        cmd->add_option("--scheme", c.scheme, "classical or global")
            ->expected(1)
            ->capture_default_str();
    }
    cmd->add_option("--tol", c.tol, "restart tolerance")->capture_default_str();
    cmd->add_option("--max-cycles", c.max_cycles, "restart cycle limit")->capture_default_str();
}

tf::ExperimentConfig make_config(const Common& c) {
    tf::ExperimentConfig cfg;
    cfg.n = c.n;
    cfg.p = c.p;
    cfg.density = c.density;
    cfg.seed = c.seed;
    cfg.m_values = c.m;
    cfg.tol = c.tol;
    cfg.max_cycles = c.max_cycles;
    cfg.schemes.clear();
    for (const auto& s : c.scheme)
        cfg.schemes.push_back(tf::parse_inner_product_kind(s));
    cfg.cases.clear();
    for (const auto& s : c.op_case)
        cfg.cases.push_back(tf::parse_operator_case(s));
    cfg.validate();
    return cfg;
}

tf::TFunctionOptions make_options(const Common& c) {
    tf::TFunctionOptions opt;
    opt.backend = tf::parse_backend(c.backend);
    opt.scheme = tf::parse_inner_product_kind(c.scheme.front());
    opt.restart.m = c.m.front();
    opt.restart.tol = c.tol;
    opt.restart.max_cycles = c.max_cycles;
    opt.restart.max_nodes = c.max_nodes;
    if (opt.restart.m < 1 || !(c.tol > 0.0) || c.max_cycles < 1)
        throw tf::ValidationError("need m >= 1, tol > 0 and max-cycles >= 1");
    if (c.max_nodes < 2 * opt.restart.initial_nodes)
        throw tf::ValidationError("--max-nodes must be at least " +
                                  std::to_string(2 * opt.restart.initial_nodes));
    return opt;
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw tf::ValidationError("cannot write " + path);
    fn(out);
    if (!out)
        throw tf::ValidationError("write failed: " + path);
}

tf::Triple parse_triple(const std::string& s) {
    tf::Triple t{};
    long long i, j, k;
    char tail;
    if (std::sscanf(s.c_str(), "%lld,%lld,%lld%c", &i, &j, &k, &tail) != 3 || i < 1 || j < 1 ||
        k < 1)
        throw tf::ValidationError("triple must be 'i,j,k' with 1-based indices, got '" + s + "'");
    t.i = i - 1;
    t.j = j - 1;
    t.k = k - 1;
    return t;
}

int run_tfunc(const std::string& fname, const std::string& in, const std::string& b_path,
              double t, const Common& c) {
    const tf::Tensor3 a = tf::load_tensor(in);
    if (a.rows() != a.cols())
        throw tf::ValidationError(in + ": frontal slices must be square");
    const tf::Tensor3 b =
        b_path.empty() ? tf::identity_tensor(a.rows(), a.depth()) : tf::load_tensor(b_path);
    const auto opt = make_options(c);
    tf::Tensor3 result = fname == "exp" ? tf::t_exp(a, t, b, opt)
                                        : tf::t_function(tf::ScalarFunction::from_name(fname),
                                                         t * a, b, opt);
    emit(c.out, [&](std::ostream& os) { tf::write_tensor(os, result); });
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functions of third-order tensors under the t-product"};
    app.require_subcommand(1);

    // One option set per subcommand; defaults differ between them.
    Common c_texp, c_tfunc, c_comm, c_exp, c_bench, c_gen;
    std::string in, b_path, fname = "exp", format = "dense";
    double t = 1.0;
    int top = 10;
    std::vector<std::string> triples;
    std::string svg;

    auto* texp = app.add_subcommand("texp", "exp(A t) * B for a TNS3 tensor");
    texp->add_option("--in", in, "tensor A (TNS3)")->required();
    texp->add_option("--b", b_path, "tensor B (TNS3); identity when omitted");
    texp->add_option("--t", t, "time")->capture_default_str();
    texp->add_option("--backend", c_texp.backend, "auto, dense, facewise, krylov, krylov-fourier")
        ->capture_default_str();
    texp->add_option("--out", c_texp.out, "output TNS3 file (stdout when omitted)");
    add_krylov_flags(texp, c_texp, false);
    texp->add_option("--max-nodes", c_texp.max_nodes, "quadrature node limit per update")
        ->capture_default_str();

    auto* tfunc = app.add_subcommand("tfunc", "f(A t) * B for a TNS3 tensor");
    tfunc->add_option("--in", in, "tensor A (TNS3)")->required();
    tfunc->add_option("--f", fname, "exp, inverse or sqrt")->capture_default_str();
    tfunc->add_option("--b", b_path, "tensor B (TNS3); identity when omitted");
    tfunc->add_option("--t", t, "scale applied to A")->capture_default_str();
    tfunc->add_option("--backend", c_tfunc.backend, "auto, dense, facewise, krylov, krylov-fourier")
        ->capture_default_str();
    tfunc->add_option("--out", c_tfunc.out, "output TNS3 file (stdout when omitted)");
    add_krylov_flags(tfunc, c_tfunc, false);
    tfunc->add_option("--max-nodes", c_tfunc.max_nodes, "quadrature node limit per update")
        ->capture_default_str();

    auto* comm = app.add_subcommand("comm", "communicability report for an adjacency tensor");
    comm->add_option("--in", in, "adjacency tensor (TNS3)")->required();
    comm->add_option("--top", top, "number of ranked nodes")->capture_default_str();
    comm->add_option("--triple", triples, "extra i,j,k entries (1-based)");
    comm->add_option("--backend", c_comm.backend, "auto, dense, facewise")->capture_default_str();
    comm->add_option("--out", c_comm.out, "output CSV (stdout when omitted)");

    auto* experiment = app.add_subcommand("experiment", "restart convergence experiment");
    add_size_flags(experiment, c_exp);
    add_krylov_flags(experiment, c_exp, true);
    experiment->add_option("--case", c_exp.op_case, "bcirc and/or fourier")->capture_default_str();
    experiment->add_option("--in", in, "use this tensor instead of a random one");
    experiment->add_option("--out", c_exp.out, "output directory")->required();
    experiment->add_option("--svg", svg, "also plot this m value as SVG");

    auto* bench = app.add_subcommand("bench", "per-cycle timing of classical vs. global");
    add_size_flags(bench, c_bench);
    add_krylov_flags(bench, c_bench, false);
    bench->add_option("--out", c_bench.out, "output CSV (stdout when omitted)");

    auto* gen = app.add_subcommand("gen", "emit a random network tensor");
    add_size_flags(gen, c_gen);
    gen->add_option("--format", format, "dense or sparse")
        ->check(CLI::IsMember({"dense", "sparse"}))
        ->capture_default_str();
    gen->add_option("--out", c_gen.out, "output TNS3 file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }

    try {
        if (*texp)
            return run_tfunc("exp", in, b_path, t, c_texp);
        if (*tfunc)
            return run_tfunc(fname, in, b_path, t, c_tfunc);

        if (*comm) {
            if (top < 0)
                throw tf::ValidationError("--top must be nonnegative");
            std::vector<tf::Triple> parsed;
            for (const auto& s : triples)
                parsed.push_back(parse_triple(s));
            const auto report =
                tf::report_communicability(in, top, tf::parse_backend(c_comm.backend), parsed);
            emit(c_comm.out, [&](std::ostream& os) { tf::write_communicability_csv(os, report); });
            return ok;
        }

        if (*experiment) {
            const auto cfg = make_config(c_exp);
            const auto report = in.empty() ? tf::run_convergence_experiment(cfg)
                                           : tf::run_convergence_experiment(cfg, tf::load_tensor(in));
            std::filesystem::create_directories(c_exp.out);
            const std::filesystem::path dir(c_exp.out);
            emit((dir / "convergence.csv").string(),
                 [&](std::ostream& os) { tf::write_convergence_csv(os, report); });
            emit((dir / "summary.csv").string(),
                 [&](std::ostream& os) { tf::write_summary_csv(os, report); });
            for (auto op_case : cfg.cases)
                std::cout << tf::format_cycle_table(report, op_case) << '\n';
            if (!svg.empty()) {
                const int m = std::stoi(svg);
                emit((dir / ("error_m" + svg + ".svg")).string(),
                     [&](std::ostream& os) { tf::write_svg_plot(os, report, m); });
            }
            return ok;
        }

        if (*bench) {
            c_bench.scheme = {"classical", "global"};
            const auto report = tf::run_benchmark(make_config(c_bench));
            emit(c_bench.out, [&](std::ostream& os) { tf::write_benchmark_csv(os, report); });
            std::cerr << "apply_bcirc slope in n: " << tf::format_double(report.apply_slope)
                      << "\nglobal faster per cycle: " << (report.global_faster ? "yes" : "no")
                      << '\n';
            return ok;
        }

        if (*gen) {
            const auto a = tf::random_network_tensor(c_gen.n, c_gen.p, c_gen.density, c_gen.seed);
            const auto fmt = format == "sparse" ? tf::TensorFormat::sparse : tf::TensorFormat::dense;
            emit(c_gen.out, [&](std::ostream& os) { tf::write_tensor(os, a.tensor(), fmt); });
            return ok;
        }
    } catch (const tf::QuadratureSaturationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return saturated;
    } catch (const tf::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return not_converged;
    } catch (const tf::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid;
    } catch (const tf::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return ok;
}
