#include "sympjet/json_io.hpp"

namespace sympjet {

namespace {

[[noreturn]] void schema(const std::string& what, const json& where = {}) {
    throw SchemaError(what, where.is_null() ? json::object() : json{{"near", where}});
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'", j);
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer", j);
    return v.get<int>();
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
    return out;
}

json to_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
    return out;
}

json to_json(const PolyScalar& p) {
    json out = json::array();
    for (const auto& [m, c] : p.terms()) out.push_back({{"exp", m.exponents()}, {"c", to_json(c)}});
    return out;
}

json to_json(const PolyMap& p) {
    json out = json::array();
    for (const auto& c : p) out.push_back(to_json(c));
    return out;
}

json to_json(const JetMap& j) {
    return {{"base", to_json(j.base())}, {"order", j.order()}, {"components", to_json(j.components())}};
}

json to_json(const TwoFormPoly& t) {
    json out = json::array();
    for (const auto& [ij, g] : t.coeffs) out.push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"g", to_json(g)}});
    return out;
}

json to_json(const HamiltonianDecomposition& h) {
    json terms = json::array();
    for (std::size_t j = 0; j < h.directions.size(); ++j)
        terms.push_back({{"b", to_json(h.directions[j])}, {"c", to_json(h.coefficients[j])}});
    return {{"k", h.degree}, {"terms", terms}};
}

json to_json(const Factor& f) {
    if (const auto* e = std::get_if<ElemFactor>(&f))
        return {{"kind", "elem"},
                {"side", e->side == Side::upper ? "u" : "l"},
                {"i", e->i + 1},
                {"j", e->j + 1},
                {"alpha", to_json(e->alpha)}};
    const auto& t = std::get<Transvection>(f);
    return {{"kind", "transvection"}, {"v", to_json(t.v)}, {"alpha", to_json(t.alpha)}};
}

json to_json(const FactorWord& w) {
    json fs = json::array();
    for (const auto& f : w.factors) fs.push_back(to_json(f));
    return {{"n", w.n}, {"factors", fs}};
}

json to_json(const UniPoly& p) {
    if (p.is_monomial_form()) {
        json out = json::array();
        for (auto c : p.newton_coeffs()) out.push_back(to_json(c));
        return out;
    }
    json nodes = json::array();
    json weights = json::array();
    json coeffs = json::array();
    for (auto c : p.nodes()) nodes.push_back(to_json(c));
    for (auto c : p.weights()) weights.push_back(to_json(c));
    for (auto c : p.newton_coeffs()) coeffs.push_back(to_json(c));
    return {{"nodes", nodes}, {"weights", weights}, {"coeffs", coeffs}};
}

json to_json(const WordFactor& f) {
    if (const auto* s = std::get_if<Shear>(&f)) {
        json out = {{"kind", "shear"}, {"v", to_json(s->v)}, {"f", to_json(s->f)}};
        if (s->power != 1) out["power"] = s->power;
        return out;
    }
    const auto& g = std::get<GradShear>(f);
    return {{"kind", "gradshear"},
            {"side", g.side == GradSide::first ? "first" : "second"},
            {"n", g.potential.nvars()},
            {"potential", to_json(g.potential)}};
}

json to_json(const Word& w) {
    json fs = json::array();
    for (const auto& f : w.factors) fs.push_back(to_json(f));
    return {{"factors", fs}};
}

json to_json(const FlatPoint& f) { return {{"point", to_json(f.point)}, {"order", f.order}}; }

json to_json(const InterpolationJob& job) {
    json flats = json::array();
    for (const auto& f : job.flats) flats.push_back(to_json(f));
    json fix = json::array();
    for (const auto& c : job.fixpoints) fix.push_back(to_json(c));
    json region = json::array();
    for (const auto& z : job.region) region.push_back(to_json(z));
    return {{"jet", to_json(job.jet)}, {"flats", flats}, {"fixpoints", fix},
            {"region", region},        {"eps", job.eps}, {"seed", job.seed}};
}

json to_json(const VerifyReport& r) {
    return {{"passed", r.passed()},
            {"symplectic_residual", r.symplectic_residual},
            {"defect_max", r.defect_max},
            {"jet_errors", r.jet_errors},
            {"flat_errors", r.flat_errors},
            {"fixpoint_errors", r.fixpoint_errors},
            {"region_sup", r.region_sup},
            {"checks",
             {{"symplectic", r.symplectic_ok},
              {"jets", r.jets_ok},
              {"flats", r.flats_ok},
              {"fixpoints", r.fixpoints_ok},
              {"region", r.region_ok}}}};
}

json to_json(const ShellSet& s, bool with_points) {
    json shells = json::array();
    for (const auto& sh : s.shells) {
        json meta = {{"j", sh.j},
                     {"delta_j", sh.delta},
                     {"counts", {{"sphere", sh.sphere.size()}, {"box", sh.box.size()}}},
                     {"resolution", s.resolution},
                     {"cells_per_axis", sh.cells_per_axis},
                     {"spacing", sh.spacing}};
        if (with_points) {
            json sphere = json::array();
            for (const auto& z : sh.sphere) sphere.push_back(to_json(z));
            json box = json::array();
            for (const auto& z : sh.box) box.push_back(to_json(z));
            meta["sphere"] = sphere;
            meta["box"] = box;
        }
        shells.push_back(meta);
    }
    return {{"n", s.n},
            {"a1", s.a1},
            {"resolution", s.resolution},
            {"box_radius", s.box_radius},
            {"sphere_net", s.sphere_net},
            {"shells", shells}};
}

json to_json(const ShellCertificate& c) {
    return {{"j", c.j},
            {"samples", c.samples},
            {"max_distance", c.max_distance},
            {"covered", c.covered},
            {"projection_count", c.sphere_count},
            {"sphere_radius_error", c.sphere_radius_error}};
}

json to_json(const LambdaImageReport& r) {
    json imgs = json::array();
    for (auto c : r.images) imgs.push_back(to_json(c));
    return {{"images", imgs}, {"injective", r.injective}, {"min_gap", std::isfinite(r.min_gap) ? json(r.min_gap) : json()}};
}

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    schema("expected a complex number [re, im]", j);
}

Vec vec_from_json(const json& j) {
    if (!j.is_array()) schema("expected a point (list of complex numbers)", j);
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = cplx_from_json(j[i]);
    return v;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) schema("expected a matrix (list of rows)", j);
    const auto rows = static_cast<Eigen::Index>(j.size());
    Mat m(rows, static_cast<Eigen::Index>(j[0].size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Vec row = vec_from_json(j[static_cast<std::size_t>(r)]);
        if (row.size() != m.cols()) schema("ragged matrix rows", j);
        m.row(r) = row.transpose();
    }
    return m;
}

std::vector<Vec> points_from_json(const json& j) {
    if (j.is_null()) return {};
    if (!j.is_array()) schema("expected a list of points", j);
    std::vector<Vec> out;
    for (const auto& p : j) out.push_back(vec_from_json(p));
    return out;
}

PolyScalar poly_from_json(const json& j, int nvars) {
    return guarded([&] {
        if (!j.is_array()) schema("expected a polynomial (list of terms)", j);
        PolyScalar p(nvars < 0 ? 0 : nvars);
        bool first = true;
        for (const auto& t : j) {
            const json& e = field(t, "exp");
            if (!e.is_array()) schema("'exp' must be a list", t);
            std::vector<int> exps;
            for (const auto& x : e) {
                if (!x.is_number_integer() || x.get<int>() < 0) schema("exponents must be non-negative integers", t);
                exps.push_back(x.get<int>());
            }
            if (first && nvars < 0) p = PolyScalar(static_cast<int>(exps.size()));
            first = false;
            if (static_cast<int>(exps.size()) != p.nvars()) schema("exponent length does not match the dimension", t);
            if (exps.size() > static_cast<std::size_t>(MultiIndex::max_vars)) schema("too many variables", t);
            p.add_term(MultiIndex(std::span<const int>(exps)), cplx_from_json(field(t, "c")));
        }
        return p;
    });
}

PolyMap polymap_from_json(const json& j, int nvars) {
    if (!j.is_array()) schema("expected a list of polynomials", j);
    PolyMap out;
    for (const auto& c : j) out.push_back(poly_from_json(c, nvars));
    return out;
}

JetMap jet_from_json(const json& j) {
    return guarded([&] {
        const Vec base = vec_from_json(field(j, "base"));
        const int order = int_field(j, "order");
        PolyMap comps = polymap_from_json(field(j, "components"), static_cast<int>(base.size()));
        if (static_cast<Eigen::Index>(comps.size()) != base.size()) schema("jet needs one component per coordinate", j);
        return JetMap(base, order, std::move(comps));
    });
}

UniPoly unipoly_from_json(const json& j) {
    return guarded([&] {
        auto list = [](const json& a) {
            if (!a.is_array()) schema("expected a list of complex numbers", a);
            std::vector<cplx> out;
            for (const auto& x : a) out.push_back(cplx_from_json(x));
            return out;
        };
        if (j.is_array()) return UniPoly::from_coefficients(list(j));
        return UniPoly::newton(list(field(j, "nodes")), list(field(j, "weights")), list(field(j, "coeffs")));
    });
}

FactorWord factor_word_from_json(const json& j) {
    return guarded([&] {
        FactorWord w;
        w.n = j.contains("n") ? int_field(j, "n") : 0;
        for (const auto& f : field(j, "factors")) {
            const std::string kind = field(f, "kind").get<std::string>();
            if (kind == "transvection") {
                Transvection t{vec_from_json(field(f, "v")), cplx_from_json(field(f, "alpha"))};
                if (w.n == 0) w.n = static_cast<int>(t.v.size() / 2);
                w.factors.emplace_back(std::move(t));
            } else if (kind == "elem") {
                const std::string side = field(f, "side").get<std::string>();
                if (side != "u" && side != "l") schema("elem side must be 'u' or 'l'", f);
                w.factors.emplace_back(ElemFactor{side == "u" ? Side::upper : Side::lower, int_field(f, "i") - 1,
                                                  int_field(f, "j") - 1, cplx_from_json(field(f, "alpha"))});
            } else {
                schema("unknown factor kind '" + kind + "'", f);
            }
        }
        if (w.n == 0 && !w.factors.empty()) schema("factor word needs 'n' when it has no transvection", j);
        return w;
    });
}

Word word_from_json(const json& j) {
    return guarded([&] {
        Word w;
        for (const auto& f : field(j, "factors")) {
            const std::string kind = field(f, "kind").get<std::string>();
            if (kind == "shear") {
                Shear s{vec_from_json(field(f, "v")), unipoly_from_json(field(f, "f")),
                        f.contains("power") ? int_field(f, "power") : 1};
                if (s.v.size() % 2 != 0 || s.v.size() == 0) schema("shear direction must have even length", f);
                if (s.power < 1) schema("shear power must be positive", f);
                w.factors.emplace_back(std::move(s));
            } else if (kind == "gradshear") {
                const std::string side = field(f, "side").get<std::string>();
                if (side != "first" && side != "second") schema("gradshear side must be 'first' or 'second'", f);
                const int n = f.contains("n") ? int_field(f, "n") : -1;
                PolyScalar pot = poly_from_json(field(f, "potential"), n);
                if (pot.nvars() == 0) schema("gradshear needs 'n' for an empty potential", f);
                w.factors.emplace_back(GradShear{side == "first" ? GradSide::first : GradSide::second, std::move(pot)});
            } else {
                schema("unknown word factor kind '" + kind + "'", f);
            }
        }
        return w;
    });
}

FlatPoint flat_from_json(const json& j) {
    return guarded([&] { return FlatPoint{vec_from_json(field(j, "point")), int_field(j, "order")}; });
}

InterpolationJob job_from_json(const json& j) {
    return guarded([&] {
        InterpolationJob job;
        job.jet = jet_from_json(field(j, "jet"));
        if (j.contains("flats"))
            for (const auto& f : j.at("flats")) job.flats.push_back(flat_from_json(f));
        if (j.contains("fixpoints")) job.fixpoints = points_from_json(j.at("fixpoints"));
        if (j.contains("region")) job.region = points_from_json(j.at("region"));
        if (j.contains("eps")) job.eps = j.at("eps").get<double>();
        if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
        const auto d = job.jet.base().size();
        for (const auto& f : job.flats)
            if (f.point.size() != d) schema("flat point dimension mismatch", j.at("flats"));
        for (const auto& c : job.fixpoints)
            if (c.size() != d) schema("fixpoint dimension mismatch", j.at("fixpoints"));
        for (const auto& z : job.region)
            if (z.size() != d) schema("region sample dimension mismatch", j.at("region"));
        return job;
    });
}

std::vector<OsculationConstraint> constraints_from_json(const json& j) {
    return guarded([&] {
        if (!j.is_array()) schema("expected a list of constraints", j);
        std::vector<OsculationConstraint> out;
        for (const auto& c : j) {
            OsculationConstraint oc{cplx_from_json(field(c, "point")), {}};
            for (const auto& x : field(c, "jet")) oc.jet.push_back(cplx_from_json(x));
            out.push_back(std::move(oc));
        }
        return out;
    });
}

CompactRegion region_from_json(const json& j) {
    return guarded([&] {
        if (j.is_array()) {
            std::vector<cplx> s;
            for (const auto& x : j) s.push_back(cplx_from_json(x));
            return CompactRegion::from_samples(std::move(s));
        }
        if (j.contains("samples")) return region_from_json(j.at("samples"));
        return CompactRegion::from_separator(cplx_from_json(field(j, "u")), field(j, "delta").get<double>(),
                                             field(j, "radius").get<double>());
    });
}

}  // namespace sympjet
