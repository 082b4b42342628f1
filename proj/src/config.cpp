#include "sympjet/config.hpp"

#include <atomic>

namespace sympjet {

namespace {
std::atomic<double> g_tolerance{1e-9};
std::atomic<int> g_degree_cap{4096};
}

double tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_tolerance(double tol) {
    if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
    g_tolerance.store(tol, std::memory_order_relaxed);
}

int degree_cap() { return g_degree_cap.load(std::memory_order_relaxed); }

void set_degree_cap(int cap) {
    if (cap < 1) throw PreconditionError("degree cap must be positive");
    g_degree_cap.store(cap, std::memory_order_relaxed);
}

Vec delta_vector(int dim) { return Vec::Ones(dim); }

}  // namespace sympjet
