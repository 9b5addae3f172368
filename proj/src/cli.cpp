#include "lowbessel/cli.hpp"

#include "lowbessel/density.hpp"
#include "lowbessel/parallel.hpp"
#include "lowbessel/path_io.hpp"
#include "lowbessel/pathdep.hpp"
#include "lowbessel/sde_schemes.hpp"
#include "lowbessel/studies.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace lowbessel::cli {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, SchemeVariant> kVariants = {
    {"truncation", SchemeVariant::euler_full_truncation},
    {"reflection", SchemeVariant::euler_reflection},
    {"implicit", SchemeVariant::drift_implicit}};

struct Common {
    EnsembleOptions ens;
    std::string out = "out";
};

void add_common(CLI::App* sub, Common& c, bool ensemble = true) {
    c.ens.threads = 0;  // 0: available parallelism
    sub->add_option("--delta", c.ens.delta, "dimension delta")->capture_default_str();
    sub->add_option("--x0", c.ens.x0, "initial value X_0 >= 0")->capture_default_str();
    sub->add_option("--T", c.ens.horizon, "time horizon")->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    if (!ensemble) return;
    sub->add_option("--paths", c.ens.paths, "number of paths")->capture_default_str();
    sub->add_option("--steps", c.ens.steps, "time steps per path")->capture_default_str();
    sub->add_option("--seed", c.ens.seed, "master seed")->capture_default_str();
    sub->add_option("--threads", c.ens.threads, "worker threads")->capture_default_str();
}

void add_variant(CLI::App* sub, std::string& v, const std::string& name = "--variant") {
    sub->add_option(name, v, "Euler boundary treatment")
        ->check(CLI::IsMember({"truncation", "reflection", "implicit"}))
        ->capture_default_str();
}

fs::path prepare_out(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_json(const fs::path& file, const nlohmann::json& j) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << j.dump(2) << '\n';
}

nlohmann::json ensemble_json(const EnsembleOptions& o) {
    return {{"delta", o.delta}, {"x0", o.x0},     {"T", o.horizon},
            {"steps", o.steps}, {"paths", o.paths}, {"seed", o.seed}};
}

int verdict(bool pass) { return pass ? kExitOk : kExitTestFailed; }

PathFunctional make_gamma(const std::string& kind, double value) {
    if (kind == "const") return value == 0.0 ? PathFunctional::zero() : PathFunctional::constant(value);
    if (kind == "clipped_sup") return clipped_running_sup(value);
    if (kind == "feedback") return saturating_feedback(value);
    throw std::invalid_argument("unknown gamma kind: " + kind);
}

nlohmann::json probe_json(const AssumptionReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"n_samples", r.n_samples},
            {"observed_growth", r.observed_growth},
            {"observed_bar_growth", r.observed_bar_growth},
            {"observed_lipschitz", r.observed_lipschitz},
            {"observed_bound", r.observed_bound},
            {"declared_growth", opt(r.declared_growth)},
            {"declared_bar_growth", opt(r.declared_bar_growth)},
            {"declared_lipschitz", opt(r.declared_lipschitz)},
            {"declared_bound", opt(r.declared_bound)},
            {"growth_violated", r.growth_violated},
            {"bar_growth_violated", r.bar_growth_violated},
            {"lipschitz_violated", r.lipschitz_violated},
            {"bound_violated", r.bound_violated}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Low-dimensional Bessel processes: simulation and verification"};
    app.set_config("--config", "", "key=value file; [subcommand] sections mirror flag names");
    app.require_subcommand(1);

    // simulate
    Common sim;
    sim.ens.paths = 1000;
    sim.ens.steps = 256;
    std::string sim_scheme = "exact", sim_variant = "truncation", sim_layout = "columns";
    double sim_gamma = 0.0;
    auto* c_sim = app.add_subcommand("simulate", "simulate a BES ensemble and write paths.csv");
    add_common(c_sim, sim);
    c_sim->add_option("--scheme", sim_scheme, "exact or euler")
        ->check(CLI::IsMember({"exact", "euler"}))
        ->capture_default_str();
    add_variant(c_sim, sim_variant);
    c_sim->add_option("--gamma", sim_gamma, "constant drift (euler only)")->capture_default_str();
    c_sim->add_option("--layout", sim_layout, "columns or files")
        ->check(CLI::IsMember({"columns", "files"}))
        ->capture_default_str();

    // verify-martingale
    Common mart;
    mart.ens.paths = 100000;
    std::string mart_f = "x2";
    double mart_gamma = 0.0, mart_z = 4.0;
    std::optional<double> mart_model;
    auto* c_mart = app.add_subcommand("verify-martingale", "z-test of the martingale property of M^f");
    add_common(c_mart, mart);
    c_mart->add_option("--f", mart_f, "test function")->capture_default_str();
    c_mart->add_option("--gamma", mart_gamma, "constant drift")->capture_default_str();
    c_mart->add_option("--model-delta", mart_model, "dimension used in the generator (negative control)");
    c_mart->add_option("--z-threshold", mart_z, "per-entry |z| threshold")->capture_default_str();

    // density-check
    Common dens;
    dens.ens.paths = 100000;
    dens.ens.steps = 16;
    double dens_alpha = 0.01;
    auto* c_dens = app.add_subcommand("density-check", "KS test of X_T against the transition density");
    add_common(c_dens, dens);
    c_dens->add_option("--alpha", dens_alpha, "KS level")->capture_default_str();

    // limit-check
    Common lim;
    lim.ens.delta = 1.0;
    lim.ens.x0 = 0.0;
    auto* c_lim = app.add_subcommand("limit-check", "x^{1-delta} int_0^T p_t(x) dt as x -> 0");
    add_common(c_lim, lim, false);

    // girsanov-check
    Common gir;
    gir.ens.delta = 1.0;
    gir.ens.paths = 100000;
    gir.ens.steps = 64;
    double gir_gamma = 0.5;
    std::string gir_variant = "truncation";
    auto* c_gir = app.add_subcommand("girsanov-check", "direct vs reweighted E[X_T] under a constant drift");
    add_common(c_gir, gir);
    c_gir->add_option("--gamma", gir_gamma, "constant drift")->capture_default_str();
    add_variant(c_gir, gir_variant);

    // pathdep-demo
    Common pd;
    pd.ens.paths = 1000;
    pd.ens.steps = 256;
    std::string pd_kind = "feedback", pd_variant = "truncation";
    double pd_gamma = 0.5;
    std::size_t pd_probe = 2000;
    auto* c_pd = app.add_subcommand("pathdep-demo", "path-dependent Bessel solver with assumption probe");
    add_common(c_pd, pd);
    c_pd->add_option("--gamma-kind", pd_kind, "const, clipped_sup or feedback")
        ->check(CLI::IsMember({"const", "clipped_sup", "feedback"}))
        ->capture_default_str();
    c_pd->add_option("--gamma", pd_gamma, "drift parameter")->capture_default_str();
    c_pd->add_option("--probe-samples", pd_probe, "random path pairs for the probe")->capture_default_str();
    add_variant(c_pd, pd_variant);

    // couple-uniqueness
    Common cu;
    cu.ens.x0 = 0.5;
    cu.ens.paths = 1000;
    cu.ens.steps = 64;
    std::string cu_kind = "feedback", cu_a = "truncation", cu_b = "reflection";
    double cu_gamma = 0.5;
    std::size_t cu_doublings = 3;
    auto* c_cu = app.add_subcommand("couple-uniqueness", "sup-distance of two schemes under shared noise");
    add_common(c_cu, cu);
    c_cu->add_option("--gamma-kind", cu_kind, "const, clipped_sup or feedback")
        ->check(CLI::IsMember({"const", "clipped_sup", "feedback"}))
        ->capture_default_str();
    c_cu->add_option("--gamma", cu_gamma, "drift parameter")->capture_default_str();
    c_cu->add_option("--doublings", cu_doublings, "grid doublings after --steps")->capture_default_str();
    add_variant(c_cu, cu_a, "--variant-a");
    add_variant(c_cu, cu_b, "--variant-b");

    // nonuniqueness-demo
    Common nu;
    nu.ens.paths = 100000;
    std::string nu_f = "x2";
    auto* c_nu = app.add_subcommand("nonuniqueness-demo", "sign flip after the first zero");
    add_common(c_nu, nu);
    c_nu->add_option("--f", nu_f, "even test function")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitError;
    }

    try {
        for (Common* c : {&sim, &mart, &dens, &gir, &pd, &cu, &nu})
            if (c->ens.threads == 0) c->ens.threads = default_threads();

        if (c_sim->parsed()) {
            const auto& o = sim.ens;
            const Dimension d(o.delta);
            const auto grid = TimeGrid::uniform(o.horizon, o.steps);
            const auto gamma = sim_gamma == 0.0 ? PathFunctional::zero() : PathFunctional::constant(sim_gamma);
            const auto variant = kVariants.at(sim_variant);
            const auto paths = parallel_map<SamplePath>(o.paths, o.threads, [&](std::size_t k) {
                const auto seed = derive_seed(o.seed, k);
                if (sim_scheme == "exact") {
                    if (sim_gamma != 0.0) throw std::invalid_argument("--gamma requires --scheme euler");
                    auto x = sqrt_path(sample_besq_exact(o.x0 * o.x0, d, grid, seed));
                    return x;
                }
                return solve_pathdep_bessel(o.x0, d, gamma, grid, seed, variant);
            });
            const auto dir = prepare_out(sim.out);
            write_ensemble_csv(dir / "paths.csv", paths,
                               sim_layout == "files" ? EnsembleLayout::file_per_path : EnsembleLayout::columns);
            std::vector<double> xt(paths.size()), st(paths.size());
            for (std::size_t k = 0; k < paths.size(); ++k) {
                xt[k] = paths[k].back();
                st[k] = xt[k] * xt[k];
            }
            const auto mx = estimate_mean(xt), ms = estimate_mean(st);
            auto j = ensemble_json(o);
            j["scheme"] = sim_scheme;
            if (sim_scheme == "euler") {
                j["variant"] = sim_variant;
                j["gamma"] = sim_gamma;
            }
            j["mean_x_terminal"] = mx.mean;
            j["stderr_x_terminal"] = mx.std_error;
            j["mean_s_terminal"] = ms.mean;
            j["stderr_s_terminal"] = ms.std_error;
            if (sim_gamma == 0.0) j["mean_s_terminal_target"] = o.x0 * o.x0 + o.delta * o.horizon;
            write_json(dir / "report.json", j);
            out << "wrote " << paths.size() << " paths to " << (dir / "paths.csv").string() << '\n';
            return kExitOk;
        }

        if (c_mart->parsed()) {
            MartingaleStudyOptions m;
            m.f = mart_f;
            m.gamma = mart_gamma;
            m.model_delta = mart_model;
            m.config = MartingaleConfig::quartiles(mart.ens.horizon);
            m.config.z_threshold = mart_z;
            const auto r = martingale_study(mart.ens, m);
            auto j = r.to_json();
            j["f"] = mart_f;
            j["delta"] = mart.ens.delta;
            j["model_delta"] = mart_model.value_or(mart.ens.delta);
            j["gamma"] = mart_gamma;
            j["ensemble"] = ensemble_json(mart.ens);
            write_json(prepare_out(mart.out) / "report.json", j);
            out << "max |z| = " << r.report.max_abs_z << (r.report.pass ? "  PASS" : "  FAIL") << '\n';
            return verdict(r.report.pass);
        }

        if (c_dens->parsed()) {
            const auto r = density_check(dens.ens, dens_alpha);
            const auto dir = prepare_out(dens.out);
            auto j = r.to_json();
            j["ensemble"] = ensemble_json(dens.ens);
            j["alpha"] = dens_alpha;
            write_json(dir / "report.json", j);
            std::ofstream t(dir / "table.csv", std::ios::binary);
            t << "y,empirical_cdf,model_cdf,abs_err\n";
            for (const auto& row : r.table)
                t << format_double(row[0]) << ',' << format_double(row[1]) << ',' << format_double(row[2]) << ','
                  << format_double(std::abs(row[1] - row[2])) << '\n';
            out << "KS = " << r.ks << " (critical " << r.critical << ")" << (r.pass ? "  PASS" : "  FAIL") << '\n';
            return verdict(r.pass);
        }

        if (c_lim->parsed()) {
            const auto r = limit_study(lim.ens.delta, lim.ens.x0, lim.ens.horizon);
            const auto dir = prepare_out(lim.out);
            auto j = r.to_json();
            j["delta"] = lim.ens.delta;
            j["x0"] = lim.ens.x0;
            j["T"] = lim.ens.horizon;
            write_json(dir / "report.json", j);
            std::ofstream t(dir / "table.csv", std::ios::binary);
            t << "x,value,limit,rel_err\n";
            for (const auto& row : r.rows) {
                t << format_double(row.x) << ',' << format_double(row.value) << ',' << format_double(row.limit)
                  << ',' << format_double(row.rel_err) << '\n';
                out << row.x << '\t' << row.value << '\t' << row.rel_err << '\n';
            }
            if (r.limit) out << "limit " << *r.limit << '\n';
            return verdict(r.pass);
        }

        if (c_gir->parsed()) {
            const auto r = girsanov_study(gir.ens, gir_gamma, kVariants.at(gir_variant));
            auto j = r.to_json();
            j["gamma"] = gir_gamma;
            j["ensemble"] = ensemble_json(gir.ens);
            write_json(prepare_out(gir.out) / "report.json", j);
            out << "direct " << r.direct.mean << ", reweighted " << r.reweighted << ", z = " << r.z
                << (r.pass ? "  PASS" : "  FAIL") << '\n';
            for (const auto& w : r.warnings) err << "warning: " << w << '\n';
            return verdict(r.pass);
        }

        if (c_pd->parsed()) {
            const auto& o = pd.ens;
            const Dimension d(o.delta);
            const auto gamma = make_gamma(pd_kind, pd_gamma);
            const auto grid = TimeGrid::uniform(o.horizon, o.steps);
            const auto variant = kVariants.at(pd_variant);
            const auto paths = parallel_map<SamplePath>(o.paths, o.threads, [&](std::size_t k) {
                return solve_pathdep_bessel(o.x0, d, gamma, grid, derive_seed(o.seed, k), variant);
            });
            bool nonnegative = true;
            for (const auto& p : paths)
                for (double v : p.values) nonnegative = nonnegative && v >= 0.0;
            const auto probe = probe_assumptions(gamma, d, pd_probe, o.seed);
            const auto moments = sup_moments(paths);
            const auto dir = prepare_out(pd.out);
            write_ensemble_csv(dir / "paths.csv", paths);
            auto j = ensemble_json(o);
            j["gamma_kind"] = pd_kind;
            j["gamma"] = pd_gamma;
            j["variant"] = pd_variant;
            j["nonnegative"] = nonnegative;
            j["probe"] = probe_json(probe);
            j["sup_moments"] = {{"m3", moments.m3},
                                {"m3_std_error", moments.m3_std_error},
                                {"m6", moments.m6},
                                {"m6_std_error", moments.m6_std_error},
                                {"warnings", moments.warnings}};
            const bool pass = nonnegative && !probe.any_violation();
            j["pass"] = pass;
            write_json(dir / "report.json", j);
            for (const auto& w : moments.warnings) err << "warning: " << w << '\n';
            out << "nonnegative " << (nonnegative ? "yes" : "no") << ", assumption violations "
                << (probe.any_violation() ? "yes" : "no") << '\n';
            return verdict(pass);
        }

        if (c_cu->parsed()) {
            const auto& o = cu.ens;
            const auto study = coupling_study(o.x0, Dimension(o.delta), make_gamma(cu_kind, cu_gamma), o.horizon,
                                              o.steps, cu_doublings, o.paths, o.seed, kVariants.at(cu_a),
                                              kVariants.at(cu_b), o.threads);
            const auto dir = prepare_out(cu.out);
            std::ofstream t(dir / "table.csv", std::ios::binary);
            t << "n_steps,q25,median,q75,q90,mean\n";
            nlohmann::json levels = nlohmann::json::array();
            for (const auto& l : study.levels) {
                t << l.n_steps << ',' << format_double(l.q25) << ',' << format_double(l.median) << ','
                  << format_double(l.q75) << ',' << format_double(l.q90) << ',' << format_double(l.mean) << '\n';
                levels.push_back({{"n_steps", l.n_steps}, {"median", l.median}, {"q25", l.q25},
                                  {"q75", l.q75}, {"q90", l.q90}, {"mean", l.mean}});
                out << l.n_steps << "\tmedian " << l.median << '\n';
            }
            auto j = ensemble_json(o);
            j["gamma_kind"] = cu_kind;
            j["gamma"] = cu_gamma;
            j["variant_a"] = cu_a;
            j["variant_b"] = cu_b;
            j["levels"] = levels;
            j["median_decreasing"] = study.median_decreasing;
            j["pass"] = study.median_decreasing;
            write_json(dir / "report.json", j);
            return verdict(study.median_decreasing);
        }

        if (c_nu->parsed()) {
            const auto r = nonuniqueness_study(nu.ens, nu_f);
            auto j = r.to_json();
            j["f"] = nu_f;
            j["ensemble"] = ensemble_json(nu.ens);
            write_json(prepare_out(nu.out) / "report.json", j);
            out << "flipped max |z| = " << r.flipped.report.max_abs_z << ", terminal mean gap z = " << r.gap_z
                << (r.pass ? "  PASS" : "  FAIL") << '\n';
            return verdict(r.pass);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"lowbessel"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lowbessel::cli
