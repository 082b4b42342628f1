#include "sympjet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sympjet {

namespace {

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool ok = false;
};

struct Outcome {
    json body;
    std::vector<Check> checks;
};

json checks_json(const std::vector<Check>& checks) {
    json out = json::array();
    for (const auto& c : checks) out.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"ok", c.ok}});
    return out;
}

Check below(std::string name, double value, double limit) {
    return {std::move(name), value, limit, std::isfinite(value) && value <= limit};
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

std::uint64_t require_seed(const CommandSpec& spec, const json& in) {
    if (spec.seed) return *spec.seed;
    if (in.contains("seed")) {
        const json& s = in.at("seed");
        if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)) return s.get<std::uint64_t>();
        throw SchemaError("'seed' must be a non-negative integer");
    }
    throw SchemaError("command '" + spec.command + "' is randomized and needs a seed (--seed or \"seed\")");
}

template <class T>
T get_or(const json& in, const char* key, T fallback) {
    if (!in.contains(key)) return fallback;
    try {
        return in.at(key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("field '") + key + "' has the wrong type");
    }
}

Outcome cmd_factor(const CommandSpec& spec, const json& in) {
    if (!in.contains("matrix")) throw SchemaError("factor: missing field 'matrix'");
    const Mat m = mat_from_json(in.at("matrix"));
    if (m.rows() != m.cols() || m.rows() % 2 != 0) throw SchemaError("factor: matrix must be square of even size");
    const SympMatrix sm(m);
    const int n = static_cast<int>(m.rows() / 2);
    FactorOptions opts;
    opts.max_factors = get_or(in, "max_factors", 0);
    const FactorWord fw = factor_sp(sm, require_seed(spec, in), opts);

    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double residual = (product(fw) - m).cwiseAbs().maxCoeff() / scale;
    Word shears;
    for (const auto& f : fw.factors) shears.factors.emplace_back(shear_of_factor(n, f));
    const double linear = (word_jacobian(shears, Vec::Zero(m.rows())) - m).cwiseAbs().maxCoeff() / scale;

    Outcome o;
    o.body["factor_word"] = to_json(fw);
    o.body["shear_word"] = to_json(shears);
    o.body["residual"] = residual;
    o.body["shear_linear_residual"] = linear;
    o.checks = {below("reconstruction", residual, 1e-7), below("shear_linear_part", linear, 1e-8)};
    return o;
}

Outcome cmd_interp(const CommandSpec& spec, const json& in) {
    InterpolationJob job = job_from_json(in);
    job.seed = require_seed(spec, in);
    const InterpolationResult res = finite_jet_interpolate(job);
    const VerifyReport rep = word_verify(res.word, verification_request(job));

    Outcome o;
    o.body["word"] = to_json(res.word);
    o.body["structure"] = {{"mover_in", res.mover_in}, {"mover_out", res.mover_out}, {"stage_sizes", res.stage_sizes}};
    o.body["report"] = to_json(rep);
    const VerifyRequest req = verification_request(job);
    o.checks = {below("symplectic", rep.symplectic_residual, req.symplectic_tol),
                below("jet_match", max_of(rep.jet_errors), req.jet_tol),
                below("flats", max_of(rep.flat_errors), req.flat_tol),
                below("fixpoints", max_of(rep.fixpoint_errors), req.fixpoint_tol),
                below("region_sup", rep.region_sup, job.region.empty() ? INFINITY : job.eps)};
    return o;
}

Outcome cmd_multi(const CommandSpec& spec, const json& in) {
    if (!in.contains("jobs") || !in.at("jobs").is_array()) throw SchemaError("multi-interp: missing list 'jobs'");
    std::vector<MultiPointJob> jobs;
    for (const auto& j : in.at("jobs")) {
        if (!j.contains("alpha") || !j.at("alpha").is_number_integer()) throw SchemaError("multi-interp: job needs integer 'alpha'");
        if (!j.contains("jet")) throw SchemaError("multi-interp: job needs 'jet'");
        jobs.push_back({j.at("alpha").get<int>(), jet_from_json(j.at("jet"))});
    }
    if (spec.stages) {
        if (*spec.stages < 0) throw SchemaError("--stages must be non-negative");
        jobs.resize(std::min(jobs.size(), static_cast<std::size_t>(*spec.stages)));
    }
    MultiPointOptions opts;
    opts.horizon = get_or(in, "horizon", opts.horizon);
    opts.eps = get_or(in, "eps", opts.eps);
    if (in.contains("region")) opts.region = points_from_json(in.at("region"));
    opts.seed = require_seed(spec, in);

    const MultiPointResult res = multi_point_stage(jobs, opts);
    const auto checks = multi_point_check(jobs, res, opts);

    Outcome o;
    o.body["word"] = to_json(res.word);
    json stages = json::array();
    for (const auto& w : res.stages) stages.push_back(to_json(w));
    o.body["stages"] = stages;
    o.body["flat_order"] = res.flat_order;
    json sc = json::array();
    for (const auto& c : checks) {
        sc.push_back({{"stage", c.stage},
                      {"jet_errors", c.jet_errors},
                      {"fixpoint_errors", c.fixpoint_errors},
                      {"region_sup", c.region_sup},
                      {"ok", c.ok}});
        const std::string k = std::to_string(c.stage);
        o.checks.push_back(below("stage" + k + "_jets", max_of(c.jet_errors), 1e-6));
        o.checks.push_back(below("stage" + k + "_fixpoints", max_of(c.fixpoint_errors), 1e-9));
    }
    o.body["stage_checks"] = sc;
    return o;
}

Outcome cmd_tame(const CommandSpec&, const json& in) {
    if (!in.contains("targets")) throw SchemaError("tame-normalize: missing field 'targets'");
    const std::vector<Vec> targets = points_from_json(in.at("targets"));
    std::vector<int> orders;
    if (in.contains("orders")) {
        try {
            orders = in.at("orders").get<std::vector<int>>();
        } catch (const json::exception&) {
            throw SchemaError("tame-normalize: 'orders' must be a list of integers");
        }
    } else {
        orders.assign(targets.size(), 1);
    }
    if (orders.size() != targets.size()) throw SchemaError("tame-normalize: one order per target");
    for (int m : orders)
        if (m < 0) throw SchemaError("tame-normalize: orders must be non-negative");
    if (targets.empty()) throw SchemaError("tame-normalize: no targets");

    const Word w = tame_normalizer(targets, orders);
    const int d = static_cast<int>(targets.front().size());
    const Mat id = Mat::Identity(d, d);

    Outcome o;
    o.body["word"] = to_json(w);
    json points = json::array();
    double worst_point = 0.0;
    double worst_jet = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const Vec at = static_cast<double>(j + 1) * delta_vector(d);
        const double point_err = (word_apply(w, at) - targets[j]).norm();
        const JetMap translation = JetMap::linear(at, id, orders[j], targets[j]);
        const double jet_err = word_jet(w, at, orders[j]).distance(translation);
        worst_point = std::max(worst_point, point_err);
        worst_jet = std::max(worst_jet, jet_err);
        points.push_back({{"j", j + 1}, {"order", orders[j]}, {"point_error", point_err}, {"translation_jet_error", jet_err}});
    }
    o.body["points"] = points;
    o.checks = {below("point_mapping", worst_point, 1e-9), below("translation_jets", worst_jet, 1e-8)};
    return o;
}

Outcome cmd_verify(const CommandSpec& spec, const json& in) {
    if (!in.contains("job") || !in.contains("word")) throw SchemaError("verify: needs 'job' and 'word'");
    InterpolationJob job = job_from_json(in.at("job"));
    if (spec.seed) job.seed = *spec.seed;
    const Word w = word_from_json(in.at("word"));
    const VerifyRequest req = verification_request(job);
    const VerifyReport rep = word_verify(w, req);

    Outcome o;
    o.body["report"] = to_json(rep);
    o.checks = {below("symplectic", rep.symplectic_residual, req.symplectic_tol),
                below("jet_match", max_of(rep.jet_errors), req.jet_tol),
                below("flats", max_of(rep.flat_errors), req.flat_tol),
                below("fixpoints", max_of(rep.fixpoint_errors), req.fixpoint_tol),
                below("region_sup", rep.region_sup, job.region.empty() ? INFINITY : job.eps)};
    return o;
}

Outcome cmd_unavoidable(const CommandSpec& spec, const json& in) {
    const int n = get_or(in, "n", 2);
    const int j_max = get_or(in, "j_max", 3);
    const double a1 = get_or(in, "a1", 1.5);
    const int resolution = get_or(in, "resolution", 8);
    const double box_radius = get_or(in, "box_radius", 1.5e-5);
    const int samples = get_or(in, "samples", 10000);
    const bool with_points = get_or(in, "with_points", false);
    if (n < 2 || j_max < 1 || resolution < 1 || samples < 1) throw SchemaError("unavoidable: parameters out of range");

    const ShellSet s = unavoidable_set(n, j_max, a1, resolution, box_radius);
    const auto certs = covering_certificate(s, samples, require_seed(spec, in));

    Outcome o;
    o.body["shell_set"] = to_json(s, with_points);
    json cj = json::array();
    for (const auto& c : certs) {
        cj.push_back(to_json(c));
        const std::string k = std::to_string(c.j);
        o.checks.push_back(below("shell" + k + "_covering", c.max_distance, s.shells[static_cast<std::size_t>(c.j - 1)].delta));
        o.checks.push_back(below("shell" + k + "_sphere_radius", c.sphere_radius_error, 1e-9));
    }
    o.body["certificates"] = cj;
    return o;
}

Outcome cmd_lemmas(const CommandSpec& spec, const json& in) {
    const int trials = get_or(in, "trials", 1000);
    const int max_dim = get_or(in, "max_dim", 4);
    const double a1 = get_or(in, "a1", 1.5);
    const int count = get_or(in, "count", 8);
    const long long terms = get_or(in, "terms", 1000000LL);
    if (trials < 1 || max_dim < 2 || count < 1 || terms < 1) throw SchemaError("lemmas: parameters out of range");

    const BoundAudit audit = projection_bound_audit(trials, require_seed(spec, in), max_dim);
    const ShellConstants sc = shell_constants(a1, count, terms);

    // a_{j+2} − a_{j+1} = 1/(j+1)², so δ_j has a closed form.
    double delta_err = 0.0;
    json closed = json::array();
    for (std::size_t i = 0; i < sc.delta.size(); ++i) {
        const double j = static_cast<double>(i + 1);
        const double gap = 1.0 / ((j + 1.0) * (j + 1.0));
        const double expect = std::pow(2.0 / (j + 2.0), 2) * std::pow(gap / 3.0, 3);
        closed.push_back(expect);
        delta_err = std::max(delta_err, std::abs(sc.delta[i] - expect) / expect);
    }
    const double limit_gap = std::abs(sc.partial - sc.limit);

    Outcome o;
    o.body["projection_bound"] = {{"trials", audit.trials}, {"passed", audit.passed}, {"worst_ratio", audit.worst_ratio}};
    o.body["shell_constants"] = {{"a1", sc.a1},
                                 {"a", sc.a},
                                 {"delta", sc.delta},
                                 {"delta_closed_form", closed},
                                 {"limit", sc.limit},
                                 {"partial", sc.partial},
                                 {"terms", sc.terms},
                                 {"tail_bound", sc.tail_bound}};
    o.checks = {{"projection_bound", static_cast<double>(audit.passed), static_cast<double>(audit.trials),
                 audit.passed == audit.trials},
                below("delta_closed_form", delta_err, 1e-12),
                below("a_sequence_limit", limit_gap, 1e-6)};
    return o;
}

using Handler = std::function<Outcome(const CommandSpec&, const json&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"factor", cmd_factor},     {"interp", cmd_interp},           {"multi-interp", cmd_multi},
        {"tame-normalize", cmd_tame}, {"verify", cmd_verify},         {"unavoidable", cmd_unavoidable},
        {"lemmas", cmd_lemmas},
    };
    return h;
}

json config_json(const CommandSpec& spec) {
    json c = {{"command", spec.command}, {"tol", spec.tol ? *spec.tol : tolerance()}, {"max_degree", spec.max_degree ? *spec.max_degree : degree_cap()}};
    c["seed"] = spec.seed ? json(*spec.seed) : json();
    c["stages"] = spec.stages ? json(*spec.stages) : json();
    return c;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::schema: return 2;
        case ErrorKind::precondition: return 3;
        case ErrorKind::numeric: return 4;
    }
    return 4;
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::schema: return "schema";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::numeric: return "numeric";
    }
    return "numeric";
}

std::string render(const CommandSpec& spec, const CommandResult& r) {
    std::ostringstream os;
    os << "sympjet " << spec.command << "\n";
    if (r.output.contains("error")) {
        const auto& e = r.output.at("error");
        os << "  error (" << e.at("kind").get<std::string>() << "): " << e.at("message").get<std::string>() << "\n";
    }
    if (r.output.contains("checks")) {
        for (const auto& c : r.output.at("checks")) {
            os << "  " << (c.at("ok").get<bool>() ? "PASS" : "FAIL") << "  " << c.at("name").get<std::string>() << "  "
               << c.at("value").dump() << " (limit " << c.at("limit").dump() << ")\n";
        }
    }
    os << "  exit " << r.exit_code << "\n";
    return os.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"factor", "interp", "multi-interp", "tame-normalize",
                                                   "verify", "unavoidable", "lemmas"};
    return names;
}

CommandResult execute(const CommandSpec& spec, const json& input) {
    CommandResult r;
    r.output["config"] = config_json(spec);
    try {
        const auto it = handlers().find(spec.command);
        if (it == handlers().end()) throw SchemaError("unknown command '" + spec.command + "'");
        if (!input.is_object()) throw SchemaError("input must be a JSON object");
        std::optional<ScopedTolerance> tol;
        std::optional<ScopedDegreeCap> cap;
        if (spec.tol) tol.emplace(*spec.tol);
        if (spec.max_degree) cap.emplace(*spec.max_degree);
        Outcome o = it->second(spec, input);
        bool ok = true;
        for (const auto& c : o.checks) ok = ok && c.ok;
        r.output["result"] = std::move(o.body);
        r.output["checks"] = checks_json(o.checks);
        r.output["passed"] = ok;
        r.exit_code = ok ? 0 : 4;
    } catch (const Error& e) {
        r.output["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}, {"diagnostic", e.diagnostic()}};
        r.output["passed"] = false;
        r.exit_code = exit_code(e.kind());
    }
    r.text = render(spec, r);
    return r;
}

int run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
    json input = json::object();
    if (!spec.input.empty()) {
        std::ifstream f(spec.input);
        if (!f) {
            err << "cannot read " << spec.input << "\n";
            return 1;
        }
        try {
            input = json::parse(f);
        } catch (const json::exception& e) {
            CommandResult r;
            r.output = {{"config", config_json(spec)},
                        {"error", {{"kind", "schema"}, {"message", std::string("invalid JSON: ") + e.what()}}},
                        {"passed", false}};
            r.exit_code = 2;
            out << r.output.dump(2) << "\n";
            return r.exit_code;
        }
    }
    const CommandResult r = execute(spec, input);
    const std::string doc = r.output.dump(2) + "\n";
    if (spec.output.empty()) {
        if (spec.text)
            out << r.text;
        else
            out << doc;
    } else {
        std::ofstream f(spec.output, std::ios::binary);
        if (!f) {
            err << "cannot write " << spec.output << "\n";
            return 1;
        }
        f << doc;
        if (spec.text) out << r.text;
    }
    return r.exit_code;
}

}  // namespace sympjet
