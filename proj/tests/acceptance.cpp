// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "lowbessel/cli.hpp"
#include "lowbessel/density.hpp"
#include "lowbessel/parallel.hpp"
#include "lowbessel/pathdep.hpp"
#include "lowbessel/studies.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace lowbessel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

EnsembleOptions ensemble(double delta, double x0, std::size_t paths, std::size_t steps, std::uint64_t seed) {
    EnsembleOptions o;
    o.delta = delta;
    o.x0 = x0;
    o.horizon = 1.0;
    o.paths = paths;
    o.steps = steps;
    o.seed = seed;
    o.threads = default_threads();
    return o;
}

constexpr double kDeltas[] = {0.0, 0.3, 0.5, 0.7, 1.0};
constexpr double kStarts[] = {0.0, 1.0};

Outcome mean_identity() {
    Outcome r{true, ""};
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double d : kDeltas)
        for (double x0 : kStarts) {
            const auto m = mean_identity_study(ensemble(d, x0, 100000, 1, 101));
            r.pass = r.pass && m.pass;
            if (std::isfinite(m.z)) worst = std::max(worst, std::abs(m.z));
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = r.pass && secs < 30.0;
    r.detail = "max |z| " + fmt("%.2f", worst) + " (< 3), " + fmt("%.1f", secs) + " s (< 30)";
    return r;
}

Outcome marginal_law() {
    Outcome r{true, ""};
    double worst_ratio = 0.0;
    for (double d : kDeltas)
        for (double x0 : kStarts) {
            const auto k = density_check(ensemble(d, x0, 100000, 16, 202), 0.01);
            r.pass = r.pass && k.pass;
            if (k.exact_zero_check) {
                r.detail += "null path nonzero values " + std::to_string(k.nonzero_values) + "; ";
                continue;
            }
            worst_ratio = std::max(worst_ratio, k.ks / k.critical);
        }
    r.detail += "max KS / critical " + fmt("%.3f", worst_ratio) + " (< 1)";
    return r;
}

Outcome martingale_z() {
    Outcome r{true, ""};
    const auto o = ensemble(0.5, 1.0, 100000, 128, 303);
    for (const char* f : {"x2", "x4", "bump0"}) {
        MartingaleStudyOptions m;
        m.f = f;
        m.config = MartingaleConfig::quartiles(1.0);
        const auto s = martingale_study(o, m);
        r.pass = r.pass && s.report.pass;
        r.detail += std::string(f) + " max |z| " + fmt("%.2f", s.report.max_abs_z) + ", ";
    }
    MartingaleStudyOptions control;
    control.model_delta = o.delta + 0.2;
    control.config = MartingaleConfig::quartiles(1.0);
    const auto c = martingale_study(o, control);
    r.pass = r.pass && c.report.max_abs_z > 4.0;
    r.detail += "control (delta + 0.2) max |z| " + fmt("%.2f", c.report.max_abs_z) + " (> 4)";
    return r;
}

Outcome nonuniqueness() {
    const auto n = nonuniqueness_study(ensemble(0.5, 1.0, 100000, 128, 404), "x2");
    return {n.pass, "flipped max |z| " + fmt("%.2f", n.flipped.report.max_abs_z) + " (< 4), terminal mean gap " +
                        fmt("%.1f", std::abs(n.gap_z)) + " stderr (> 5)"};
}

Outcome harmonic() {
    MartingaleStudyOptions m;
    m.f = "harmonic";
    m.config = MartingaleConfig::quartiles(1.0);
    const auto s = martingale_study(ensemble(0.5, 1.0, 100000, 128, 505), m);
    return {s.report.pass, "h(X) increment max |z| " + fmt("%.2f", s.report.max_abs_z) + " (< 4)"};
}

Outcome occupation_limit() {
    Outcome r{true, ""};
    for (double d : {0.5, 1.0}) {
        const auto l = limit_study(d, 0.0, 1.0);
        r.pass = r.pass && l.pass;
        r.detail += "x0=0 delta=" + fmt("%g", d) + " rel err " + fmt("%.2e", l.rel_error) + " (< 1e-2); ";
    }
    for (double d : {0.5, 1.0}) {
        const auto l = limit_study(d, 1.0, 1.0);
        r.pass = r.pass && l.pass;
        r.detail += "x0=1 delta=" + fmt("%g", d) + " ratio " + fmt("%.3f", l.decay_ratio) + " (< 1e-2); ";
    }
    r.detail.resize(r.detail.size() - 2);
    return r;
}

Outcome absorption() {
    const auto a = absorption_check(ensemble(0.0, 1.0, 10000, 64, 707));
    return {a.violations == 0 && a.absorbed > 0,
            std::to_string(a.absorbed) + " absorbed, " + std::to_string(a.violations) + " left 0 (must be 0)"};
}

Outcome bessel_bound() {
    Outcome r{true, ""};
    double overall = 0.0;
    for (double nu : {-0.5, -0.25, 0.0, 0.5}) {
        double best = -1.0, arg = 0.0;
        for (int i = 0; i <= 4500; ++i) {
            const double z = 5.0 + 0.01 * i;
            const double v = bessel_I_scaled(nu, z);
            r.pass = r.pass && std::isfinite(v) && v <= 1.0;
            if (v > best) {
                best = v;
                arg = z;
            }
        }
        if (nu <= 0.0) r.pass = r.pass && arg == 5.0;
        overall = std::max(overall, best);
    }
    r.detail = "max I_nu(z) e^-z " + fmt("%.4f", overall) + " (<= 1), argmax at z = 5 for nu <= 0";
    return r;
}

Outcome scheme_consistency() {
    const auto s = scheme_consistency_study(ensemble(1.0, 0.0, 10000, 64, 909), {64, 256, 1024},
                                            SchemeVariant::euler_reflection);
    std::string d = "KS";
    for (double k : s.ks) d += " " + fmt("%.4f", k);
    d += ", ratios";
    for (double q : s.ratios) d += " " + fmt("%.2f", q);
    return {s.pass, d + " (each in [0.25, 0.75])"};
}

Outcome girsanov() {
    const auto g = girsanov_study(ensemble(1.0, 1.0, 100000, 64, 1010), 0.5, SchemeVariant::euler_full_truncation);
    return {g.pass, "direct " + fmt("%.4f", g.direct.mean) + ", reweighted " + fmt("%.4f", g.reweighted) + ", |z| " +
                        fmt("%.2f", std::abs(g.z)) + " (< 3)"};
}

Outcome coupling() {
    const auto c = coupling_study(0.5, Dimension(0.5), saturating_feedback(0.5), 1.0, 64, 3, 1000, 1111,
                                  SchemeVariant::euler_full_truncation, SchemeVariant::euler_reflection,
                                  default_threads());
    std::string d = "median sup|S_a - S_b|";
    for (const auto& l : c.levels) d += " " + fmt("%.3g", l.median);
    return {c.median_decreasing, d + " (strictly decreasing)"};
}

Outcome radial() {
    const auto r = radial_study(ensemble(3.0, 1.0, 10000, 1024, 1212), 0.3, 0.01);
    return {r.pass, "KS " + fmt("%.4f", r.ks) + " (< " + fmt("%.4f", r.critical) + ")"};
}

std::string slurp(const fs::path& f) {
    std::ifstream is(f, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "lowbessel_acceptance";
    fs::remove_all(base);
    std::vector<std::string> outputs;
    std::ostringstream sink;
    bool ok = true;
    const std::vector<std::vector<std::string>> runs{
        {"simulate", "--scheme", "exact", "--paths", "200", "--steps", "64", "--seed", "7", "--threads", "1"},
        {"simulate", "--scheme", "exact", "--paths", "200", "--steps", "64", "--seed", "7", "--threads", "4"},
        {"pathdep-demo", "--paths", "50", "--steps", "64", "--seed", "7", "--probe-samples", "100", "--threads", "1"},
        {"pathdep-demo", "--paths", "50", "--steps", "64", "--seed", "7", "--probe-samples", "100", "--threads", "3"}};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto args = runs[i];
        const auto dir = base / std::to_string(i);
        args.insert(args.end(), {"--out", dir.string()});
        ok = ok && cli::run(args, sink, sink) == cli::kExitOk;
        outputs.push_back(slurp(dir / "paths.csv") + slurp(dir / "report.json"));
    }
    ok = ok && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[2] == outputs[3];
    fs::remove_all(base);
    return {ok, "simulate and pathdep-demo outputs byte-identical across repeated runs and thread counts"};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"mean identity E S_T = x0^2 + delta T", mean_identity},
        {"marginal law of X_T vs transition density", marginal_law},
        {"martingale z-test and negative control", martingale_z},
        {"sign-flipped ensemble: same test, different law", nonuniqueness},
        {"harmonic h(X) has driftless increments", harmonic},
        {"weighted occupation integral near the origin", occupation_limit},
        {"absorption at 0 for delta = 0", absorption},
        {"scaled Bessel I bound on [5, 50]", bessel_bound},
        {"Euler vs exact KS under refinement", scheme_consistency},
        {"Girsanov reweighting vs direct drift", girsanov},
        {"truncation/reflection coupling under refinement", coupling},
        {"radial oracle vs path-dependent solver, delta = 3", radial},
        {"determinism", determinism},
    };
    int failures = 0, n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %2d %s  %s: %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", n - failures, n);
    return failures == 0 ? 0 : 1;
}
