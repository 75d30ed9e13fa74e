#include "arproc/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "arproc/errors.hpp"
#include "arproc/model1.hpp"
#include "arproc/model2.hpp"
#include "arproc/model3.hpp"
#include "arproc/sim.hpp"
#include "arproc/stability.hpp"

namespace arproc {

namespace {

using nlohmann::json;

std::string num(double x) {
    if (!std::isfinite(x)) throw NonConvergence("non-finite value reached the output layer");
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

int threads_cap() {
    const char* env = std::getenv("ARPROC_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

json meta_json(const RunConfig& cfg) {
    json m;
    m["tool"] = kToolVersion;
    m["config_hash"] = config_hash(cfg);
    m["seed"] = cfg.sim.seed;
    m["quad_abs_tol"] = cfg.quad.abs_tol;
    m["quad_rel_tol"] = cfg.quad.rel_tol;
    m["threads"] = threads_cap();
    m["config"] = json::parse(cfg.canonical);
    return m;
}

void meta_csv(const RunConfig& cfg, std::ostream& out) {
    out << "# tool: " << kToolVersion << "\n";
    out << "# config_hash: " << config_hash(cfg) << "\n";
    out << "# seed: " << cfg.sim.seed << "\n";
    out << "# quad_abs_tol: " << num(cfg.quad.abs_tol) << "\n";
    out << "# quad_rel_tol: " << num(cfg.quad.rel_tol) << "\n";
    out << "# threads: " << threads_cap() << "\n";
    out << "# config: " << cfg.canonical << "\n";
}

bool is_model3(const RunConfig& cfg) { return cfg.model.model == ModelKind::III; }

M3Kernel m3_kernel(const RunConfig& cfg, double r) {
    M3Kernel k;
    k.lambda = cfg.model.A.rates().at(0);
    k.B = cfg.model.B;
    k.r = r;
    k.w0 = cfg.model.w0;
    k.rule = cfg.quad;
    return k;
}

bool near_lambda(const RunConfig& cfg, double s) {
    if (!is_model3(cfg)) return false;
    double lambda = cfg.model.A.rates().at(0);
    return std::abs(s - lambda) <= 1e-9 * (1.0 + lambda);
}

// Precomputed analytic state for one config, shared across grid evaluations.
struct Analytic {
    const RunConfig& cfg;
    // Model I / II stationary
    bool have_stationary = false;
    StationaryLaw m1_law;
    M2Stationary m2_law;
    SeriesControl m2_ctl;
    double m3_pinf = 0.0, m3_ew = 0.0;

    explicit Analytic(const RunConfig& c) : cfg(c) {}

    void solve_stationary() {
        switch (cfg.model.model) {
            case ModelKind::I:
                m1_law = m1_stationary(cfg.model, cfg.quad);
                break;
            case ModelKind::II:
                m2_law = m2_stationary(cfg.model, cfg.quad);
                break;
            case ModelKind::III: {
                M3Kernel k = m3_kernel(cfg, 1.0);
                m3_pinf = m3_p_infinity(k);
                m3_ew = m3_mean(k);
                break;
            }
        }
        have_stationary = true;
    }

    double atom() const {
        switch (cfg.model.model) {
            case ModelKind::I: return m1_law.atom;
            case ModelKind::II: return m2_law.atom;
            default: return m3_pinf;
        }
    }

    Complex stationary_lst(double s) {
        switch (cfg.model.model) {
            case ModelKind::I:
                return m1_stationary_lst(cfg.model, Complex(s), m1_law.coeffs);
            case ModelKind::II:
                return m2_stationary_lst(cfg.model, Complex(s), m2_law.coeffs, m2_ctl);
            default:
                return Complex(m3_stationary_lst(m3_kernel(cfg, 1.0), s));
        }
    }

    double mean() {
        switch (cfg.model.model) {
            case ModelKind::I: return m1_law.mean;
            case ModelKind::III: return m3_ew;
            case ModelKind::II: {
                // complex-step derivative of the LST at 0: Phi'(0) = -E W
                double h = 1e-7;
                Complex v = m2_stationary_lst(cfg.model, Complex(0.0, h), m2_law.coeffs, m2_ctl);
                return -v.imag() / h;
            }
        }
        return 0.0;
    }
};

// Transient transform Psi_W(r, s) per model.
struct TransientEval {
    const RunConfig& cfg;
    double r;
    bool solved = false;
    CoeffVector coeffs;
    SeriesControl ctl;
    bool m2_unit = false;

    TransientEval(const RunConfig& c, double r_in) : cfg(c), r(r_in) {}

    void solve() {
        switch (cfg.model.model) {
            case ModelKind::I:
                coeffs = m1_transient_coeffs(cfg.model, r, cfg.quad);
                break;
            case ModelKind::II: {
                double a = cfg.model.V.pos_atom_value();
                m2_unit = std::abs(a - 1.0) <= 1e-12;
                coeffs = m2_unit ? m2_transient_coeffs_a1(cfg.model, r, cfg.quad)
                                 : m2_transient_coeffs_alt(cfg.model, r, cfg.quad, ctl);
                break;
            }
            case ModelKind::III:
                break;  // evaluated pointwise
        }
        solved = true;
    }

    Complex eval(double s) {
        switch (cfg.model.model) {
            case ModelKind::I:
                return m1_transient_lst(cfg.model, r, Complex(s), coeffs);
            case ModelKind::II:
                return m2_unit ? m2_transient_lst_a1(cfg.model, r, Complex(s), coeffs)
                               : m2_transient_lst_alt(cfg.model, r, Complex(s), coeffs, ctl);
            default:
                return Complex(m3_transient_lst(m3_kernel(cfg, r), s));
        }
    }
};

const char* case_name(StabilityCase c) {
    switch (c) {
        case StabilityCase::C1: return "C1";
        case StabilityCase::C2: return "C2";
        case StabilityCase::C3: return "C3";
        default: return "LogMoment";
    }
}

const char* verdict_name(StabilityVerdictKind k) {
    switch (k) {
        case StabilityVerdictKind::ProperUniqueLimit: return "ProperUniqueLimit";
        case StabilityVerdictKind::StationaryExists: return "StationaryExists";
        case StabilityVerdictKind::PossiblyImproper: return "PossiblyImproper";
        default: return "Unsupported";
    }
}

int run_stability(const RunConfig& cfg, std::ostream& out) {
    StabilityVerdict v = classify(cfg.model, cfg.quad, 200000, cfg.sim.seed);
    json j;
    j["meta"] = meta_json(cfg);
    j["verdict"] = verdict_name(v.kind);
    if (v.kind == StabilityVerdictKind::ProperUniqueLimit) j["case"] = case_name(v.which);
    j["unique"] = v.unique;
    j["convergence_warning"] = v.convergence_warning;
    j["diagnostics"] = v.diagnostics;
    out << j.dump(2) << "\n";
    return 0;
}

int run_stationary(const RunConfig& cfg, std::ostream& out) {
    Analytic an(cfg);
    an.solve_stationary();
    double atom = an.atom();
    double mean = an.mean();
    if (cfg.output_format == "json") {
        json j;
        j["meta"] = meta_json(cfg);
        j["atom"] = atom;
        j["mean"] = mean;
        json curve = json::array();
        for (double s : cfg.s_grid) {
            if (near_lambda(cfg, s)) continue;
            Complex v = an.stationary_lst(s);
            curve.push_back({{"s", s}, {"re", v.real()}, {"im", v.imag()}});
        }
        j["curve"] = curve;
        out << j.dump(2) << "\n";
    } else {
        meta_csv(cfg, out);
        out << "# atom: " << num(atom) << "\n";
        out << "# mean: " << num(mean) << "\n";
        out << "s,re,im\n";
        for (double s : cfg.s_grid) {
            if (near_lambda(cfg, s)) continue;
            Complex v = an.stationary_lst(s);
            out << num(s) << "," << num(v.real()) << "," << num(v.imag()) << "\n";
        }
    }
    return 0;
}

int run_transient(const RunConfig& cfg, std::ostream& out) {
    if (cfg.output_format == "json") {
        json j;
        j["meta"] = meta_json(cfg);
        json curves = json::array();
        for (double r : cfg.r_values) {
            TransientEval ev(cfg, r);
            ev.solve();
            json rows = json::array();
            for (double s : cfg.s_grid) {
                if (near_lambda(cfg, s)) continue;
                Complex v = ev.eval(s);
                rows.push_back({{"s", s}, {"re", v.real()}, {"im", v.imag()}});
            }
            curves.push_back({{"r", r}, {"curve", rows}});
        }
        j["curves"] = curves;
        out << j.dump(2) << "\n";
    } else {
        meta_csv(cfg, out);
        out << "r,s,re,im\n";
        for (double r : cfg.r_values) {
            TransientEval ev(cfg, r);
            ev.solve();
            for (double s : cfg.s_grid) {
                if (near_lambda(cfg, s)) continue;
                Complex v = ev.eval(s);
                out << num(r) << "," << num(s) << "," << num(v.real()) << ","
                    << num(v.imag()) << "\n";
            }
        }
    }
    return 0;
}

int run_moments(const RunConfig& cfg, std::ostream& out) {
    Analytic an(cfg);
    an.solve_stationary();
    json j;
    j["meta"] = meta_json(cfg);
    j["atom"] = an.atom();
    j["mean"] = an.mean();
    if (is_model3(cfg) && cfg.model.B.kind() == DistKind::Exponential) {
        double lambda = cfg.model.A.rates().at(0);
        double mu = cfg.model.B.rates().at(0);
        MomentSeq ms = m3_moments_expB(lambda, mu, cfg.moments_order);
        j["omegas"] = ms.omegas;
        j["p_inf"] = ms.p_inf;
        j["negative_moment"] = ms.negative_moment;
        j["mu_le_lambda"] = ms.mu_le_lambda;
    }
    out << j.dump(2) << "\n";
    return 0;
}

int run_iterate(const RunConfig& cfg, std::ostream& out) {
    if (!is_model3(cfg))
        throw UnsupportedParameter("iterate requires a uniform-multiplier model");
    M3Kernel k = m3_kernel(cfg, 1.0);
    std::vector<double> grid = cfg.s_grid;
    bool usable = grid.size() >= 8 && grid.front() == 0.0 && grid.back() >= k.lambda;
    for (std::size_t i = 0; usable && i + 1 < grid.size(); ++i)
        if (grid[i + 1] <= grid[i]) usable = false;
    if (!usable) grid = m3_default_grid(k);
    M3Iteration it = m3_iterate_transient(k, cfg.iterate_steps, grid);
    if (cfg.output_format == "json") {
        json j;
        j["meta"] = meta_json(cfg);
        j["s_grid"] = grid;
        j["p"] = it.p;
        j["phi"] = it.phi;
        out << j.dump(2) << "\n";
    } else {
        meta_csv(cfg, out);
        for (std::size_t i = 0; i < it.p.size(); ++i)
            out << "# p[" << i << "]: " << num(it.p[i]) << "\n";
        out << "i,s,phi\n";
        for (std::size_t i = 0; i < it.phi.size(); ++i)
            for (std::size_t g = 0; g < grid.size(); ++g)
                out << i << "," << num(grid[g]) << "," << num(it.phi[i][g]) << "\n";
    }
    return 0;
}

json estimate_json(const SimEstimate& e) {
    return {{"value", e.value},
            {"std_error", e.std_error},
            {"n_effective", e.n_effective},
            {"seed", e.seed}};
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
    json j;
    j["meta"] = meta_json(cfg);
    StabilityVerdict v = classify(cfg.model, cfg.quad, 200000, cfg.sim.seed);
    j["stability"] = verdict_name(v.kind);
    if (v.kind != StabilityVerdictKind::Unsupported) {
        StationaryEstimates st = estimate_stationary(cfg.model, cfg.sim, cfg.s_grid);
        json stj;
        stj["atom"] = estimate_json(st.atom);
        stj["mean"] = estimate_json(st.mean);
        json lst = json::array();
        for (const auto& [s, e] : st.lst)
            lst.push_back({{"s", s}, {"estimate", estimate_json(e)}});
        stj["lst"] = lst;
        j["stationary"] = stj;
    }
    json tr = json::array();
    for (double r : cfg.r_values)
        for (double s : cfg.s_grid) {
            SimEstimate e = estimate_geometric_transform(cfg.model, r, s, cfg.sim);
            tr.push_back({{"r", r}, {"s", s}, {"estimate", estimate_json(e)}});
        }
    j["geometric_transform"] = tr;
    out << j.dump(2) << "\n";
    return 0;
}

bool model_simulable(const ModelSpec& m) {
    if (!m.A.simulable() || !m.B.simulable()) return false;
    std::function<bool(const MultiplierSpec&)> ok = [&](const MultiplierSpec& v) {
        switch (v.variant()) {
            case MultiplierSpec::Variant::NegativeScaledDist: return v.base().simulable();
            case MultiplierSpec::Variant::MixedAtom: return ok(v.negative_part());
            default: return true;
        }
    };
    return ok(m.V);
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
    if (!model_simulable(cfg.model))
        throw UnsupportedParameter("validate needs samplable distributions on every leg");
    json j;
    j["meta"] = meta_json(cfg);
    json rows = json::array();
    bool all_pass = true;
    auto push = [&](const std::string& name, double analytic, const SimEstimate& e) {
        double se = e.std_error > 0.0 ? e.std_error : 1e-300;
        double z = (e.value - analytic) / se;
        bool pass = std::abs(z) < 4.0;
        all_pass = all_pass && pass;
        rows.push_back({{"functional", name},
                        {"analytic", analytic},
                        {"simulated", e.value},
                        {"std_error", e.std_error},
                        {"z", z},
                        {"pass", pass}});
    };

    StabilityVerdict v = classify(cfg.model, cfg.quad, 200000, cfg.sim.seed);
    j["stability"] = verdict_name(v.kind);
    bool do_stationary = v.kind == StabilityVerdictKind::ProperUniqueLimit;
    j["stationary_compared"] = do_stationary;
    if (do_stationary) {
        Analytic an(cfg);
        an.solve_stationary();
        std::vector<double> svals;
        for (double s : cfg.s_grid)
            if (s > 0.0 && !near_lambda(cfg, s)) svals.push_back(s);
        StationaryEstimates st = estimate_stationary(cfg.model, cfg.sim, svals);
        push("atom", an.atom(), st.atom);
        push("mean", an.mean(), st.mean);
        for (double s : svals) {
            Complex a = an.stationary_lst(s);
            push("lst(s=" + num(s) + ")", a.real(), st.lst.at(s));
        }
    }
    for (double r : cfg.r_values) {
        TransientEval ev(cfg, r);
        ev.solve();
        for (double s : cfg.s_grid) {
            if (!(s > 0.0) || near_lambda(cfg, s)) continue;
            double analytic = (1.0 - r) * ev.eval(s).real();
            SimEstimate e = estimate_geometric_transform(cfg.model, r, s, cfg.sim);
            push("transform(r=" + num(r) + ",s=" + num(s) + ")", analytic, e);
        }
    }
    j["comparisons"] = rows;
    j["pass"] = all_pass;
    out << j.dump(2) << "\n";
    return all_pass ? 0 : 4;
}

const char* error_type(const Error& e) {
    if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
    if (dynamic_cast<const ToleranceNotMet*>(&e)) return "ToleranceNotMet";
    if (dynamic_cast<const RootCountMismatch*>(&e)) return "RootCountMismatch";
    if (dynamic_cast<const PoleCollision*>(&e)) return "PoleCollision";
    if (dynamic_cast<const PoleHit*>(&e)) return "PoleHit";
    if (dynamic_cast<const SeriesBudgetExceeded*>(&e)) return "SeriesBudgetExceeded";
    if (dynamic_cast<const StabilityError*>(&e)) return "StabilityError";
    if (dynamic_cast<const ExtrapolationMismatch*>(&e)) return "ExtrapolationMismatch";
    if (dynamic_cast<const GridTooCoarse*>(&e)) return "GridTooCoarse";
    if (dynamic_cast<const UnsupportedParameter*>(&e)) return "UnsupportedParameter";
    if (dynamic_cast<const Inconclusive*>(&e)) return "Inconclusive";
    if (dynamic_cast<const SEvalAtLambda*>(&e)) return "SEvalAtLambda";
    if (dynamic_cast<const SingularMatrix*>(&e)) return "SingularMatrix";
    if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
    if (dynamic_cast<const NotRational*>(&e)) return "NotRational";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    return "Error";
}

int fail(const Error& e, int code, std::ostream& out) {
    json j;
    j["error"] = {{"type", error_type(e)}, {"message", e.what()}};
    if (auto* se = dynamic_cast<const SchemaError*>(&e))
        if (!se->field.empty()) j["error"]["field"] = se->field;
    j["exit_code"] = code;
    out << j.dump(2) << "\n";
    return code;
}

}  // namespace

int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out) {
    try {
        if (subcommand == "stability") return run_stability(cfg, out);
        if (subcommand == "stationary") return run_stationary(cfg, out);
        if (subcommand == "transient") return run_transient(cfg, out);
        if (subcommand == "moments") return run_moments(cfg, out);
        if (subcommand == "iterate") return run_iterate(cfg, out);
        if (subcommand == "simulate") return run_simulate(cfg, out);
        if (subcommand == "validate") return run_validate(cfg, out);
        throw SchemaError("unknown subcommand '" + subcommand + "'", "subcommand");
    } catch (const SchemaError& e) {
        return fail(e, 2, out);
    } catch (const Error& e) {
        return fail(e, 3, out);
    }
}

}  // namespace arproc
