#include "arproc/config.hpp"

#include <cstdio>

#include <json.hpp>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) ok = true;
        if (!ok) throw SchemaError("unknown key '" + it.key() + "' in " + where, where);
    }
}

double need_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw SchemaError("missing or non-numeric '" + std::string(key) + "' in " + where,
                          where + "." + key);
    return j[key].get<double>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + " must be an array", where);
    std::vector<double> out;
    for (auto& v : j) {
        if (!v.is_number()) throw SchemaError(where + " entries must be numbers", where);
        out.push_back(v.get<double>());
    }
    return out;
}

DistSpec parse_dist(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError(where + " must be an object with a 'kind'", where);
    std::string kind = j["kind"].get<std::string>();
    if (kind == "exponential") {
        reject_unknown(j, {"kind", "rate"}, where);
        return DistSpec::Exponential(need_number(j, "rate", where));
    }
    if (kind == "erlang") {
        reject_unknown(j, {"kind", "shape", "rate"}, where);
        return DistSpec::Erlang(int(need_number(j, "shape", where)),
                                need_number(j, "rate", where));
    }
    if (kind == "hyperexponential") {
        reject_unknown(j, {"kind", "weights", "rates"}, where);
        return DistSpec::HyperExponential(number_list(j.value("weights", json::array()),
                                                      where + ".weights"),
                                          number_list(j.value("rates", json::array()),
                                                      where + ".rates"));
    }
    if (kind == "coxian") {
        reject_unknown(j, {"kind", "rates", "exit_probs"}, where);
        return DistSpec::CoxianChain(number_list(j.value("rates", json::array()),
                                                 where + ".rates"),
                                     number_list(j.value("exit_probs", json::array()),
                                                 where + ".exit_probs"));
    }
    if (kind == "deterministic") {
        reject_unknown(j, {"kind", "value"}, where);
        return DistSpec::Deterministic(need_number(j, "value", where));
    }
    if (kind == "uniform") {
        reject_unknown(j, {"kind", "lo", "hi"}, where);
        return DistSpec::Uniform(need_number(j, "lo", where), need_number(j, "hi", where));
    }
    if (kind == "raw_rational") {
        reject_unknown(j, {"kind", "numerator", "poles"}, where);
        std::vector<Complex> num, poles;
        for (auto& c : j.value("numerator", json::array())) num.push_back(Complex(c.get<double>()));
        for (auto& p : j.value("poles", json::array())) {
            if (!p.is_array() || p.size() != 2)
                throw SchemaError(where + ".poles entries must be [re, im] pairs",
                                  where + ".poles");
            poles.push_back(Complex(p[0].get<double>(), p[1].get<double>()));
        }
        return DistSpec::RawRational(Poly(std::move(num)), std::move(poles));
    }
    throw SchemaError("unknown distribution kind '" + kind + "' in " + where, where + ".kind");
}

MultiplierSpec parse_multiplier(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError(where + " must be an object with a 'kind'", where);
    std::string kind = j["kind"].get<std::string>();
    if (kind == "atoms") {
        reject_unknown(j, {"kind", "atoms"}, where);
        std::vector<std::pair<double, double>> atoms;
        for (auto& a : j.value("atoms", json::array())) {
            if (!a.is_array() || a.size() != 2)
                throw SchemaError(where + ".atoms entries must be [value, prob] pairs",
                                  where + ".atoms");
            atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
        return MultiplierSpec::NegativeAtoms(std::move(atoms));
    }
    if (kind == "scaled") {
        reject_unknown(j, {"kind", "c", "dist"}, where);
        return MultiplierSpec::NegativeScaledDist(need_number(j, "c", where),
                                                  parse_dist(j.at("dist"), where + ".dist"));
    }
    if (kind == "mixed") {
        reject_unknown(j, {"kind", "a", "p", "negative"}, where);
        double p = need_number(j, "p", where);
        if (!(p > 0.0 && p < 1.0))
            throw SchemaError("mixed multiplier needs p in (0,1)", where + ".p");
        if (!j.contains("negative"))
            throw SchemaError("mixed multiplier needs a 'negative' part", where + ".negative");
        return MultiplierSpec::MixedAtom(need_number(j, "a", where), p,
                                         parse_multiplier(j["negative"], where + ".negative"));
    }
    if (kind == "uniform01") {
        reject_unknown(j, {"kind"}, where);
        return MultiplierSpec::Uniform01();
    }
    if (kind == "power_uniform") {
        reject_unknown(j, {"kind", "alpha"}, where);
        return MultiplierSpec::PowerUniform(need_number(j, "alpha", where));
    }
    throw SchemaError("unknown multiplier kind '" + kind + "' in " + where, where + ".kind");
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
    if (j.is_array()) return number_list(j, where);
    if (j.is_object()) {
        reject_unknown(j, {"from", "to", "points"}, where);
        double from = need_number(j, "from", where), to = need_number(j, "to", where);
        int points = int(need_number(j, "points", where));
        if (points < 2 || to <= from) throw SchemaError("bad grid range in " + where, where);
        std::vector<double> out;
        for (int i = 0; i < points; ++i)
            out.push_back(from + (to - from) * double(i) / double(points - 1));
        return out;
    }
    throw SchemaError(where + " must be an array or a range object", where);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what(), "");
    }
    if (!j.is_object()) throw SchemaError("config root must be an object", "");
    reject_unknown(j,
                   {"model", "V", "A", "B", "w0", "r_values", "s_grid", "quad", "sim",
                    "moments_order", "iterate_steps", "output"},
                   "config");

    RunConfig cfg;
    std::string model = j.value("model", std::string{});
    if (model == "I")
        cfg.model.model = ModelKind::I;
    else if (model == "II")
        cfg.model.model = ModelKind::II;
    else if (model == "III")
        cfg.model.model = ModelKind::III;
    else
        throw SchemaError("'model' must be one of \"I\", \"II\", \"III\"", "model");

    if (!j.contains("V")) throw SchemaError("missing 'V'", "V");
    cfg.model.V = parse_multiplier(j["V"], "V");
    if (!j.contains("A")) throw SchemaError("missing 'A'", "A");
    cfg.model.A = parse_dist(j["A"], "A");
    if (!j.contains("B")) throw SchemaError("missing 'B'", "B");
    cfg.model.B = parse_dist(j["B"], "B");
    cfg.model.w0 = j.value("w0", 0.0);
    try {
        cfg.model.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(e.what(), "model");
    }

    if (j.contains("r_values")) {
        cfg.r_values = number_list(j["r_values"], "r_values");
        for (double r : cfg.r_values)
            if (!(r > 0.0 && r < 1.0))
                throw SchemaError("r_values must lie in (0,1)", "r_values");
    }
    if (j.contains("s_grid")) cfg.s_grid = parse_grid(j["s_grid"], "s_grid");
    for (double s : cfg.s_grid)
        if (s < 0.0) throw SchemaError("s_grid values must be non-negative", "s_grid");

    if (j.contains("quad")) {
        const json& q = j["quad"];
        reject_unknown(q, {"abs_tol", "rel_tol", "max_subdivisions"}, "quad");
        cfg.quad.abs_tol = q.value("abs_tol", cfg.quad.abs_tol);
        cfg.quad.rel_tol = q.value("rel_tol", cfg.quad.rel_tol);
        cfg.quad.max_subdivisions = q.value("max_subdivisions", cfg.quad.max_subdivisions);
        if (cfg.quad.abs_tol <= 0.0 || cfg.quad.rel_tol <= 0.0 || cfg.quad.max_subdivisions < 1)
            throw SchemaError("invalid quadrature settings", "quad");
    }
    if (j.contains("sim")) {
        const json& s = j["sim"];
        reject_unknown(s, {"replications", "path_length", "burn_in", "seed", "antithetic"},
                       "sim");
        cfg.sim.replications = s.value("replications", cfg.sim.replications);
        cfg.sim.path_length = s.value("path_length", cfg.sim.path_length);
        cfg.sim.burn_in = s.value("burn_in", cfg.sim.burn_in);
        cfg.sim.seed = s.value("seed", cfg.sim.seed);
        cfg.sim.antithetic = s.value("antithetic", cfg.sim.antithetic);
        if (cfg.sim.replications < 1 || cfg.sim.burn_in >= cfg.sim.path_length)
            throw SchemaError("sim needs replications >= 1 and burn_in < path_length", "sim");
    }
    cfg.moments_order = j.value("moments_order", cfg.moments_order);
    if (cfg.moments_order < 1) throw SchemaError("moments_order must be >= 1", "moments_order");
    cfg.iterate_steps = j.value("iterate_steps", cfg.iterate_steps);
    if (cfg.iterate_steps < 1) throw SchemaError("iterate_steps must be >= 1", "iterate_steps");

    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"format", "path"}, "output");
        cfg.output_format = o.value("format", cfg.output_format);
        cfg.output_path = o.value("path", cfg.output_path);
        if (cfg.output_format != "csv" && cfg.output_format != "json")
            throw SchemaError("output.format must be 'csv' or 'json'", "output.format");
    }

    cfg.canonical = j.dump();
    return cfg;
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : cfg.canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace arproc
