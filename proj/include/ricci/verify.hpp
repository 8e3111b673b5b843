#pragma once

#include <cstdint>

#include "ricci/core.hpp"

namespace ricci {

/// Numerical verdict on properties (A)-(D) of a candidate frame: curvature
/// triples vanish, sectional values cluster into {-nu, mu}, negative
/// partners are counted, and mu - (k-1) nu is strictly positive.
struct CompsimpReport {
    bool propA = false;
    bool propB = false;
    bool propC = false;
    bool propD = false;
    double mu = 0.0;
    double nu = 0.0;
    std::vector<int> neg_partner_counts;
    double ric_lower = 0.0;  // (d-k) mu - (k-1) nu
    double tol = 0.0;        // cluster tolerance used

    bool all_true() const { return propA && propB && propC && propD; }
};

CompsimpReport check_compsimp(const MetricField& g, const Vec& p, const Frame& K,
                              int k);

/// A sampled Ric_k query: unit u together with the orthonormal (k+1)-frame
/// spanning V (u is the first frame vector's coefficient representation).
struct RicKQuery {
    Vec u;                    // coefficients in the K frame
    std::vector<Vec> basis;   // orthonormal basis of V, in K coefficients
    double value = 0.0;
};

struct MinRicResult {
    double min_value = 0.0;
    RicKQuery argmin;
    int samples = 0;
};

// Minimum of Ric_k(u, V) over `budget` Haar-style random (u, V) queries in
// span K, followed by derivative-free coordinate-descent refinement. The
// reported minimum is an upper bound on the true infimum. Deterministic for
// a fixed seed.
// When sample_values is non-null every raw sampled value is appended to it
// (CSV dumps).
MinRicResult min_ric_k(const MetricField& g, const Vec& p, const Frame& K, int k,
                       int budget, uint64_t seed = 0,
                       std::vector<double>* sample_values = nullptr);

// Same search against a precomputed point curvature (the frame must be
// orthonormal under pc.gp).
MinRicResult min_ric_k(const PointCurvature& pc, const Frame& K, int k,
                       int budget, uint64_t seed = 0,
                       std::vector<double>* sample_values = nullptr);

// (d-k) mu - (k-1) nu.
double ric_lower_bound(int d, int k, double mu, double nu);

}  // namespace ricci
