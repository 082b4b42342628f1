#include "sympjet/osculation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sympjet {

namespace {

double cross(cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Closest point to the origin on the segment [a, b].
cplx closest_on_segment(cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return a;
    const double t = std::clamp(-(std::conj(ab) * a).real() / len2, 0.0, 1.0);
    return a + t * ab;
}

}  // namespace

std::pair<cplx, double> separating_direction(const std::vector<cplx>& samples) {
    if (samples.empty()) return {1.0, 0.0};
    // Convex hull by monotone chain, then the hull point nearest the origin.
    std::vector<cplx> pts = samples;
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<cplx> hull;
    if (pts.size() < 3) {
        hull = pts;
    } else {
        hull.resize(2 * pts.size());
        std::size_t k = 0;
        for (const auto& p : pts) {
            while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
            hull[k++] = p;
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
            hull[k++] = pts[i];
        }
        hull.resize(k - 1);
    }
    cplx best = hull.front();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const cplx c = closest_on_segment(hull[i], hull[(i + 1) % hull.size()]);
        if (std::abs(c) < std::abs(best)) best = c;
    }
    if (std::abs(best) == 0.0) return {1.0, 0.0};
    const cplx u = best / std::abs(best);
    double delta = INFINITY;
    for (const auto& s : samples) delta = std::min(delta, (std::conj(u) * s).real());
    return {u, delta};
}

CompactRegion CompactRegion::from_samples(std::vector<cplx> samples) {
    if (samples.empty()) throw PreconditionError("CompactRegion: no samples");
    CompactRegion k;
    const auto [u, delta] = separating_direction(samples);
    double radius = 0.0;
    for (const auto& s : samples) radius = std::max(radius, std::abs(s));
    if (!(delta > 1e-12 * std::max(1.0, radius)))
        throw PreconditionError("CompactRegion: 0 is not separated from the samples", {{"margin", delta}});
    k.samples = std::move(samples);
    k.u = u;
    k.delta = delta;
    k.radius = radius;
    return k;
}

CompactRegion CompactRegion::from_separator(cplx u, double delta, double radius) {
    if (std::abs(u) == 0.0) throw PreconditionError("CompactRegion: zero separator direction");
    if (!(delta > 0.0) || !(radius >= delta))
        throw PreconditionError("CompactRegion: need 0 < delta <= radius", {{"delta", delta}, {"radius", radius}});
    CompactRegion k;
    k.u = u / std::abs(u);
    k.delta = delta;
    k.radius = radius;
    return k;
}

UniPoly hermite_osculate(const std::vector<OsculationConstraint>& constraints) {
    std::vector<cplx> z;
    std::vector<int> group;
    std::vector<cplx> values;
    for (std::size_t g = 0; g < constraints.size(); ++g) {
        const auto& c = constraints[g];
        if (c.jet.empty()) throw PreconditionError("hermite_osculate: empty constraint jet");
        for (std::size_t h = 0; h < g; ++h) {
            if (constraints[h].point == c.point)
                throw PreconditionError("hermite_osculate: duplicate constraint point",
                                        {{"point", {c.point.real(), c.point.imag()}}});
        }
        for (std::size_t k = 0; k < c.jet.size(); ++k) {
            z.push_back(c.point);
            group.push_back(static_cast<int>(g));
            values.push_back(c.jet.front());
        }
    }
    if (z.empty()) return {};
    const std::size_t total = z.size();

    // In-place divided differences; coef[i] holds f[z_{i−k}, …, z_i] after pass k.
    std::vector<cplx> coef = values;
    std::vector<std::size_t> start(total);  // first index of each node's group
    for (std::size_t i = 0; i < total; ++i) start[i] = (i > 0 && group[i] == group[i - 1]) ? start[i - 1] : i;
    for (std::size_t k = 1; k < total; ++k) {
        for (std::size_t i = total - 1; i >= k; --i) {
            if (group[i] == group[i - k]) {
                coef[i] = constraints[static_cast<std::size_t>(group[i])].jet[k];
            } else {
                coef[i] = (coef[i] - coef[i - 1]) / (z[i] - z[i - k]);
            }
        }
    }
    std::vector<cplx> nodes(z.begin(), z.end() - 1);
    std::vector<cplx> weights(nodes.size(), cplx(1.0));
    UniPoly p = UniPoly::newton(nodes, weights, coef);

    double worst = 0.0;
    double scale = 1.0;
    for (const auto& c : constraints) {
        const auto t = p.taylor(c.point, static_cast<int>(c.jet.size()) - 1);
        for (std::size_t k = 0; k < c.jet.size(); ++k) {
            worst = std::max(worst, std::abs(t[k] - c.jet[k]));
            scale = std::max(scale, std::abs(c.jet[k]));
        }
    }
    if (worst > 1e-9 * scale) {
        double sep = INFINITY;
        for (std::size_t a = 0; a < constraints.size(); ++a)
            for (std::size_t b = a + 1; b < constraints.size(); ++b)
                sep = std::min(sep, std::abs(constraints[a].point - constraints[b].point));
        double cmax = 0.0;
        for (auto c : coef) cmax = std::max(cmax, std::abs(c));
        throw NumericError("hermite_osculate: confluent system is ill-conditioned",
                           {{"residual", worst}, {"min_separation", sep}, {"condition_estimate", cmax / scale}});
    }
    return p;
}

namespace {

// Upper bound of |p| on the disk of radius r.
double disk_bound(const UniPoly& p, double r) {
    const auto& c = p.newton_coeffs();
    if (c.empty()) return 0.0;
    double acc = std::abs(c.back());
    for (std::size_t i = p.nodes().size(); i-- > 0;)
        acc = acc * std::abs(p.weights()[i]) * (r + std::abs(p.nodes()[i])) + std::abs(c[i]);
    return acc;
}

int required_power(const std::vector<double>& log_rest, const std::vector<double>& log_base, double eps) {
    const double le = std::log(eps);
    double need = 0.0;
    for (std::size_t i = 0; i < log_rest.size(); ++i) {
        if (log_rest[i] == -INFINITY || log_rest[i] < le) continue;
        if (!(log_base[i] < 0.0)) return -1;
        need = std::max(need, std::floor((log_rest[i] - le) / -log_base[i]) + 1.0);
    }
    return need > 1e9 ? -1 : static_cast<int>(need);
}

}  // namespace

UniPoly attenuate(const UniPoly& rest, const CompactRegion& k, cplx center, double eps, int max_degree) {
    if (!(eps > 0.0)) throw PreconditionError("attenuation: eps must be positive");
    max_degree = std::min(max_degree, degree_cap());
    CompactRegion shifted = k;
    if (!k.samples.empty()) {
        std::vector<cplx> rel;
        rel.reserve(k.samples.size());
        for (const auto& s : k.samples) rel.push_back(s - center);
        shifted = CompactRegion::from_samples(std::move(rel));
    } else if (center != cplx(0.0)) {
        throw PreconditionError("attenuation: a shifted centre needs sampled regions");
    }
    const cplx cu = (shifted.delta / (shifted.radius * shifted.radius)) * std::conj(shifted.u);

    std::vector<double> log_rest;
    std::vector<double> log_base;
    if (!shifted.samples.empty()) {
        for (std::size_t i = 0; i < k.samples.size(); ++i) {
            log_rest.push_back(std::log(std::abs(rest.eval(k.samples[i]))));
            log_base.push_back(std::log(std::abs(1.0 - cu * shifted.samples[i])));
        }
    } else {
        const double ratio = shifted.delta / shifted.radius;
        log_rest.push_back(std::log(disk_bound(rest, shifted.radius)));
        log_base.push_back(0.5 * std::log1p(-ratio * ratio));
    }

    int d = required_power(log_rest, log_base, eps);
    if (d < 0 || d > max_degree)
        throw NumericError("attenuation: required degree exceeds the cap",
                           {{"required", d < 0 ? nlohmann::json("unbounded") : nlohmann::json(d)},
                            {"max_degree", max_degree},
                            {"margin", shifted.delta},
                            {"radius", shifted.radius}});

    auto build = [&](int power) {
        std::vector<cplx> nodes = rest.nodes();
        std::vector<cplx> weights = rest.weights();
        std::vector<cplx> coeffs = rest.newton_coeffs();
        if (coeffs.empty()) return UniPoly{};
        // rest · Π (−cū)(ζ − (center + 1/(cū))): append factors below the leading coefficient.
        const cplx node = center + 1.0 / cu;
        for (int i = 0; i < power; ++i) {
            nodes.push_back(node);
            weights.push_back(-cu);
            coeffs.push_back(0.0);
        }
        // Shift the leading coefficient to the new top slot.
        const std::size_t top = coeffs.size() - 1;
        const std::size_t old_top = top - static_cast<std::size_t>(power);
        if (power > 0) {
            coeffs[top] = coeffs[old_top];
            coeffs[old_top] = 0.0;
            // Lower Newton coefficients of rest must vanish for this to be a product.
            for (std::size_t i = 0; i < old_top; ++i) {
                if (coeffs[i] != cplx(0.0)) throw PreconditionError("attenuation: rest must be in product form");
            }
        }
        return UniPoly::newton(std::move(nodes), std::move(weights), std::move(coeffs));
    };

    // Guard against rounding at the boundary of the bound.
    for (int extra = 0; extra < 8; ++extra, ++d) {
        if (d > max_degree) break;
        UniPoly out = build(d);
        double sup = 0.0;
        for (const auto& s : k.samples) sup = std::max(sup, std::abs(out.eval(s)));
        if (k.samples.empty() || sup < eps) return out;
    }
    throw NumericError("attenuation: sampled bound not reached", {{"max_degree", max_degree}});
}

UniPoly attenuation_factor(const CompactRegion& k, double eps, int max_degree) {
    return attenuate(UniPoly::from_coefficients({1.0}), k, 0.0, eps, max_degree);
}

UniPoly magic_function(int r, cplx beta, const std::vector<Flat>& flats, const std::vector<cplx>& zeros,
                       const std::optional<CompactRegion>& region, double eps, const MagicOptions& opts) {
    if (r < 0) throw PreconditionError("magic_function: negative degree");
    std::map<std::pair<double, double>, std::pair<cplx, int>> flat_set;
    for (const auto& f : flats) {
        if (f.point == cplx(0.0)) throw PreconditionError("magic_function: flat point at 0");
        if (f.order < 0) throw PreconditionError("magic_function: negative flat order");
        auto& slot = flat_set[{f.point.real(), f.point.imag()}];
        slot.first = f.point;
        slot.second = std::max(slot.second, f.order);
    }
    std::map<std::pair<double, double>, cplx> zero_set;
    for (const auto& c : zeros) {
        if (c == cplx(0.0)) throw PreconditionError("magic_function: prescribed zero at 0");
        if (flat_set.count({c.real(), c.imag()}) && flat_set[{c.real(), c.imag()}].second >= 1) continue;
        zero_set[{c.real(), c.imag()}] = c;
    }

    std::vector<cplx> nodes;
    std::vector<cplx> weights;
    for (int i = 0; i < r; ++i) {
        nodes.push_back(0.0);
        weights.push_back(1.0);
    }
    for (const auto& [key, fo] : flat_set) {
        for (int i = 0; i < fo.second; ++i) {
            nodes.push_back(fo.first);
            weights.push_back(-1.0 / fo.first);
        }
    }
    for (const auto& [key, c] : zero_set) {
        nodes.push_back(c);
        weights.push_back(-1.0 / c);
    }
    UniPoly f = UniPoly::product(beta, std::move(nodes), std::move(weights));
    if (f.is_zero()) return f;
    if (opts.exact_order > r) {
        std::vector<cplx> jet(static_cast<std::size_t>(opts.exact_order + 1), cplx(0.0));
        jet[static_cast<std::size_t>(r)] = beta;
        return attenuate_with_jet(f, region, 0.0, eps, jet, opts.max_degree);
    }
    if (!region) return f;
    return attenuate(f, *region, 0.0, eps, opts.max_degree);
}

UniPoly attenuate_with_jet(const UniPoly& rest, const std::optional<CompactRegion>& k, cplx center, double eps,
                           const std::vector<cplx>& jet, int max_degree) {
    if (rest.is_zero()) throw PreconditionError("attenuate_with_jet: zero polynomial");
    const auto& rc = rest.newton_coeffs();
    for (std::size_t i = 0; i + 1 < rc.size(); ++i)
        if (rc[i] != cplx(0.0)) throw PreconditionError("attenuate_with_jet: rest must be in product form");
    if (k && k->samples.empty()) throw PreconditionError("attenuate_with_jet: the region must be sampled");
    if (jet.empty()) return k ? attenuate(rest, *k, center, eps, max_degree) : rest;

    const int m = static_cast<int>(jet.size()) - 1;
    const int s = static_cast<int>(std::count(rest.nodes().begin(), rest.nodes().end(), center));
    for (int j = 0; j < std::min(s, m + 1); ++j)
        if (jet[static_cast<std::size_t>(j)] != cplx(0.0))
            throw PreconditionError("attenuate_with_jet: jet is nonzero below the root multiplicity", {{"order", j}});

    // g·H with H = Σ h_j (ζ − center)^j solving g̃·H ≡ jet/(ζ−center)^s mod (ζ−center)^{m−s+1}.
    auto with_tail = [&](const UniPoly& g) {
        if (s > m) return g;
        const std::vector<cplx> t = g.taylor(center, m);
        const int len = m - s + 1;
        if (t[static_cast<std::size_t>(s)] == cplx(0.0)) throw NumericError("attenuate_with_jet: degenerate centre");
        std::vector<cplx> h(static_cast<std::size_t>(len));
        for (int j = 0; j < len; ++j) {
            cplx acc = jet[static_cast<std::size_t>(s + j)];
            for (int i = 1; i <= j; ++i) acc -= t[static_cast<std::size_t>(s + i)] * h[static_cast<std::size_t>(j - i)];
            h[static_cast<std::size_t>(j)] = acc / t[static_cast<std::size_t>(s)];
        }
        std::vector<cplx> nodes = g.nodes();
        std::vector<cplx> weights = g.weights();
        const cplx lead = g.newton_coeffs().back();
        std::vector<cplx> coeffs(nodes.size(), cplx(0.0));
        for (int j = 0; j < len; ++j) {
            if (j > 0) {
                nodes.push_back(center);
                weights.push_back(1.0);
            }
            coeffs.push_back(lead * h[static_cast<std::size_t>(j)]);
        }
        return UniPoly::newton(std::move(nodes), std::move(weights), std::move(coeffs));
    };
    if (!k) return with_tail(rest);

    // The tail grows only polynomially in d, so tightening the target of the
    // plain attenuation converges quickly.
    double target = eps;
    double sup = 0.0;
    for (int round = 0; round < 16; ++round) {
        const UniPoly f = with_tail(attenuate(rest, *k, center, target, max_degree));
        sup = 0.0;
        for (const auto& z : k->samples) sup = std::max(sup, std::abs(f.eval(z)));
        if (sup < eps) return f;
        target *= 0.5 * eps / sup;
    }
    throw NumericError("attenuate_with_jet: sampled bound not reached", {{"sup", sup}, {"eps", eps}});
}

}  // namespace sympjet
