// Acceptance suite: one line per criterion.
//   acceptance [--only N[,M...]] [--expect-fail N[,M...]] [--jobs J]
// Exit status is 0 when the failing set equals the expected-failure set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "sympjet/json_io.hpp"
#include "support.hpp"

using namespace sympjet;
using namespace sympjet::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    json artifact;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int g_jobs_per_cell = 25;

Outcome criterion1() {
    const auto t0 = Clock::now();
    double worst_jac = 0.0;
    double worst_defect = 0.0;
    json art = json::array();
    for (int t = 0; t < 500; ++t) {
        Rng rng(1000 + static_cast<std::uint64_t>(t));
        const int n = 1 + t % 3;
        const int degree = 1 + static_cast<int>(rng() % 6);
        Word w;
        if (t % 2 == 0)
            w.factors.emplace_back(random_shear(rng, n, degree, 0.5));
        else
            w.factors.emplace_back(random_gradshear(rng, n, std::max(2, degree), 0.5));
        double jac = 0.0;
        double defect = 0.0;
        for (int s = 0; s < 20; ++s) {
            const Vec z = random_ball_point(rng, 2 * n, 1.0);
            jac = std::max(jac, symplectic_residual(word_jacobian(w, z)));
            if (s < 2) {
                const JetMap jet = word_jet(w, z, 5);
                const double scale = std::max(1.0, max_abs_coeff(jet.components()));
                defect = std::max(defect, pullback_defect(jet).max_abs_coeff() / (scale * scale));
            }
        }
        worst_jac = std::max(worst_jac, jac);
        worst_defect = std::max(worst_defect, defect);
        art.push_back({jac, defect});
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst_jac < 1e-9 && worst_defect < 1e-9 && secs < 30.0;
    o.detail = "shear exactness: max |G^T J G - J| " + fmt("%.2e", worst_jac) + ", max relative pullback defect (order 5) " +
               fmt("%.2e", worst_defect) + ", " + fmt("%.1f", secs) + " s";
    o.artifact = art;
    return o;
}

Outcome criterion2() {
    const auto t0 = Clock::now();
    double worst_rec = 0.0;
    double worst_lin = 0.0;
    json art = json::array();
    for (int t = 0; t < 100; ++t) {
        Rng rng(2000 + static_cast<std::uint64_t>(t));
        const int n = 1 + t % 3;
        const int count = 1 + static_cast<int>(rng() % 12);
        FactorWord gen{n, {}};
        for (int i = 0; i < count; ++i) gen.factors.emplace_back(random_elem(rng, n, 1.0));
        const Mat m = product(gen);
        const FactorWord fw = factor_sp(SympMatrix(m, 1e-8), 7 + static_cast<std::uint64_t>(t));
        const double scale = m.cwiseAbs().maxCoeff();
        const double rec = (product(fw) - m).cwiseAbs().maxCoeff() / scale;
        Word shears;
        for (const auto& f : fw.factors) shears.factors.emplace_back(shear_of_factor(n, f));
        const double lin = (word_jacobian(shears, Vec::Zero(2 * n)) - m).cwiseAbs().maxCoeff() / scale;
        worst_rec = std::max(worst_rec, rec);
        worst_lin = std::max(worst_lin, lin);
        art.push_back(to_json(fw));
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst_rec < 1e-7 && worst_lin < 1e-8 && secs < 60.0;
    o.detail = "factorization round trip: max relative residual " + fmt("%.2e", worst_rec) +
               ", shear linear part " + fmt("%.2e", worst_lin) + ", " + fmt("%.1f", secs) + " s";
    o.artifact = art;
    return o;
}

Outcome criterion3() {
    double worst_pot = 0.0;
    double worst_resum = 0.0;
    int count_mismatch = 0;
    json art = json::array();
    for (int t = 0; t < 200; ++t) {
        Rng rng(3000 + static_cast<std::uint64_t>(t));
        const int n = 1 + t % 3;
        const int k = 1 + (t / 3) % 4;
        const PolyScalar h = random_poly(rng, 2 * n, k + 1, k + 1, 1.0);
        const PolyMap p = hamiltonian_field(h);
        const PolyScalar back = hamiltonian_potential(p);
        const double pot = back.distance(h);
        const HamiltonianDecomposition dec = hamiltonian_decompose(p, k, 17 + static_cast<std::uint64_t>(t));
        const double resum = distance(dec.resum(), p);
        worst_pot = std::max(worst_pot, pot);
        worst_resum = std::max(worst_resum, resum);
        if (static_cast<long long>(dec.directions.size()) != binomial(2 * n + k, 2 * n - 1)) ++count_mismatch;
        art.push_back({pot, resum, dec.directions.size()});
    }
    Outcome o;
    o.pass = worst_pot < 1e-8 && worst_resum < 1e-8 && count_mismatch == 0;
    o.detail = "Hamiltonian round trip: potential " + fmt("%.2e", worst_pot) + ", resummation " +
               fmt("%.2e", worst_resum) + ", basis count mismatches " + std::to_string(count_mismatch);
    o.artifact = art;
    return o;
}

Outcome criterion4() {
    const auto t0 = Clock::now();
    double jet = 0.0, flat = 0.0, fix = 0.0, region_ratio = 0.0, sym = 0.0;
    int failures = 0;
    int errors = 0;
    std::string first_error;
    json art = json::array();
    for (int n : {1, 2}) {
        for (int k = 1; k <= 4; ++k) {
            for (int s = 0; s < g_jobs_per_cell; ++s) {
                const std::uint64_t seed = 4000 + 100 * static_cast<std::uint64_t>(10 * n + k) + static_cast<std::uint64_t>(s);
                const InterpolationJob job = oracle_job(n, k, seed);
                try {
                    const InterpolationResult res = finite_jet_interpolate(job);
                    const VerifyReport rep = word_verify(res.word, verification_request(job));
                    for (double e : rep.jet_errors) jet = std::max(jet, e);
                    for (double e : rep.flat_errors) flat = std::max(flat, e);
                    for (double e : rep.fixpoint_errors) fix = std::max(fix, e);
                    region_ratio = std::max(region_ratio, rep.region_sup / job.eps);
                    sym = std::max(sym, rep.symplectic_residual);
                    if (!rep.passed()) ++failures;
                    art.push_back(to_json(res.word).dump());
                } catch (const Error& e) {
                    ++errors;
                    if (first_error.empty())
                        first_error = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " seed=" +
                                      std::to_string(seed) + ": " + e.what() + " " + e.diagnostic().dump();
                    art.push_back(std::string("error: ") + e.what());
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = failures == 0 && errors == 0 && jet < 1e-6 && flat < 1e-8 && fix < 1e-9 && region_ratio <= 1.0 &&
             secs < 300.0;
    o.detail = "jet interpolation: " + std::to_string(16 * g_jobs_per_cell / 2) + " jobs, jet " + fmt("%.2e", jet) +
               ", flats " + fmt("%.2e", flat) + ", fixpoints " + fmt("%.2e", fix) + ", region sup/eps " +
               fmt("%.3f", region_ratio) + ", symplectic " + fmt("%.2e", sym) + ", failed " +
               std::to_string(failures) + ", errors " + std::to_string(errors) + ", " + fmt("%.1f", secs) + " s";
    if (!first_error.empty()) o.detail += " (first error " + first_error + ")";
    o.artifact = art;
    return o;
}

Outcome criterion5() {
    const int n = 2;
    const Vec delta = delta_vector(2 * n);
    Rng rng(5000);
    std::vector<Vec> targets;
    std::vector<int> orders;
    for (int j = 0; j < 6; ++j) {
        targets.push_back(random_cplx(rng, 2.0) * delta);
        orders.push_back(2);
    }
    const Word w = tame_normalizer(targets, orders);
    double point = 0.0;
    double jet = 0.0;
    for (int j = 0; j < 6; ++j) {
        const Vec at = static_cast<double>(j + 1) * delta;
        point = std::max(point, (word_apply(w, at) - targets[static_cast<std::size_t>(j)]).norm());
        const JetMap translation =
            JetMap::linear(at, Mat::Identity(2 * n, 2 * n), 2, targets[static_cast<std::size_t>(j)]);
        jet = std::max(jet, word_jet(w, at, 2).distance(translation));
    }
    Outcome o;
    o.pass = point < 1e-9 && jet < 1e-8;
    o.detail = "tame normalizer: point mapping " + fmt("%.2e", point) + ", translation jet " + fmt("%.2e", jet);
    o.artifact = to_json(w);
    return o;
}

Outcome criterion6() {
    const int n = 2;
    Rng rng(6000);
    std::vector<MultiPointJob> jobs;
    for (int alpha = 1; alpha <= 3; ++alpha) jobs.push_back({alpha, anchored_jet(rng, n, alpha, 2)});
    MultiPointOptions opts;
    opts.horizon = 10;
    opts.eps = 1e-3;
    opts.seed = 6001;
    opts.region = cluster(rng, Vec::Constant(2 * n, cplx(-2.0, 3.0)), 0.3, 8);
    Outcome o;
    try {
        const MultiPointResult res = multi_point_stage(jobs, opts);
        const auto checks = multi_point_check(jobs, res, opts);
        bool ok = checks.size() == jobs.size();
        double jet = 0.0, fix = 0.0;
        for (const auto& c : checks) {
            ok = ok && c.ok;
            for (double e : c.jet_errors) jet = std::max(jet, e);
            for (double e : c.fixpoint_errors) fix = std::max(fix, e);
        }
        o.pass = ok;
        o.detail = "multi-point stage: " + std::to_string(checks.size()) + " stages, (i_k) jets " + fmt("%.2e", jet) +
                   ", (ii_k) fixpoints up to 10 Delta " + fmt("%.2e", fix);
        o.artifact = to_json(res.word);
    } catch (const Error& e) {
        o.pass = false;
        o.detail = std::string("multi-point stage: error ") + e.what() + " " + e.diagnostic().dump();
        o.artifact = e.what();
    }
    return o;
}

Outcome criterion7() {
    const BoundAudit audit = projection_bound_audit(1000, 7000, 4);
    const ShellConstants sc = shell_constants(1.5, 3, 1000000);
    const double expected = 4.0 / 177147.0;
    const double rel = std::abs(sc.delta[0] - expected) / expected;
    const double limit_gap = std::abs(sc.partial - sc.limit);
    const bool audit_ok = audit.passed == audit.trials;
    const bool delta_ok = rel < 1e-12;
    const bool limit_ok = limit_gap < 1e-6 || sc.tail_bound <= 1e-6;
    Outcome o;
    o.pass = audit_ok && delta_ok && limit_ok;
    o.detail = "lemma audits: projection bound " + std::to_string(audit.passed) + "/" + std::to_string(audit.trials) +
               (audit_ok ? " ok" : " FAIL") + " (worst ratio " + fmt("%.3f", audit.worst_ratio) + "), delta_1 " +
               fmt("%.12e", sc.delta[0]) + " vs 4/177147 rel " + fmt("%.2e", rel) + (delta_ok ? " ok" : " FAIL") +
               ", a-limit gap " + fmt("%.3e", limit_gap) + (limit_ok ? " ok" : " FAIL");
    o.artifact = {{"passed", audit.passed}, {"worst", audit.worst_ratio}, {"delta", sc.delta}, {"partial", sc.partial}};
    return o;
}

Outcome criterion8() {
    const ShellSet s = unavoidable_set(2, 3, 1.5, 8, 1.5e-5);
    const auto certs = covering_certificate(s, 10000, 8000);
    bool ok = certs.size() == 3;
    std::ostringstream os;
    os << "unavoidable set: ";
    for (const auto& c : certs) {
        const auto& sh = s.shells[static_cast<std::size_t>(c.j - 1)];
        ok = ok && c.covered && c.samples == 10000 && c.sphere_count > 0 && c.sphere_radius_error < 1e-9;
        os << "j=" << c.j << " covered " << (c.covered ? "yes" : "no") << " max dist/delta "
           << fmt("%.3f", c.max_distance / sh.delta) << " radius-" << c.j << " count " << c.sphere_count << "; ";
    }
    Outcome o;
    o.pass = ok;
    o.detail = os.str();
    json art = to_json(s, false);
    for (const auto& c : certs) art["certificates"].push_back(to_json(c));
    o.artifact = art;
    return o;
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    std::set<int> expect_fail;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) only = parse_list(argv[++i]);
        else if (a == "--expect-fail" && i + 1 < argc) expect_fail = parse_list(argv[++i]);
        else if (a == "--jobs" && i + 1 < argc) g_jobs_per_cell = std::stoi(argv[++i]);
    }
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8};
    std::set<int> failed;
    std::vector<std::string> first_artifacts(criteria.size());
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int id = static_cast<int>(c + 1);
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[c]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("unexpected exception: ") + e.what();
        }
        first_artifacts[c] = o.artifact.dump();
        if (!o.pass) failed.insert(id);
        std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    if (only.empty() || only.count(9)) {
        int mismatches = 0;
        std::string which;
        for (std::size_t c = 0; c < criteria.size(); ++c) {
            const int id = static_cast<int>(c + 1);
            if (!only.empty() && !only.count(id)) continue;
            std::string again;
            try {
                again = criteria[c]().artifact.dump();
            } catch (const std::exception& e) {
                again = e.what();
            }
            if (again != first_artifacts[c]) {
                ++mismatches;
                which += " " + std::to_string(id);
            }
        }
        if (mismatches) failed.insert(9);
        std::printf("criterion 9: %s  determinism: reran criteria, %d artifact mismatches%s\n",
                    mismatches ? "FAIL" : "PASS", mismatches, which.c_str());
    }
    if (failed == expect_fail) return 0;
    std::printf("unexpected outcome: failing set differs from the expected-failure set\n");
    return 1;
}
