#pragma once

#include <map>
#include <string>
#include <vector>

#include "magwkb/laguerre.hpp"
#include "magwkb/operators.hpp"
#include "magwkb/radial_wkb.hpp"

namespace magwkb {

// Outcome of one numerical check: per-h observations, a log-log slope fit and
// a verdict against a target exponent.
struct VerificationReport {
    std::string check;
    std::vector<double> h_values;
    std::vector<double> observed;
    std::vector<bool> included;          // passed the grid-refinement gate
    std::vector<double> refinement_change;  // |obs(n) - obs(2n)| / obs(2n), when measured
    double slope = 0;
    double slope_ci = 0;  // RMS residual of the log-log fit
    bool has_slope = false;
    double target = 0;
    double tolerance = 0;
    bool pass = false;
    std::string verdict;
    std::map<std::string, double> scalars;  // check-specific extra numbers
    std::vector<std::string> notes;
};

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double rms_residual = 0;
};
// Least-squares line through (log h, log v); all values must be positive.
SlopeFit fit_log_log(const std::vector<double>& h, const std::vector<double>& values);

std::vector<double> default_h_ladder();  // 2^-3 .. 2^-7

// Discretization controls shared by the radial sweeps.
struct RadialSweepOptions {
    double depth = 40;         // window: phase(rho_max) = depth * h (divided by 1 - epsilon when weighted)
    double nodes_per_h = 0;    // grid density; 0 = check-specific default
    double refinement_gate = 0.1;  // max relative change between n and 2n nodes
    int jobs = 1;              // worker threads over h values
    int min_nodes = 1000;      // lower bound on the grid size
    double rho_max = 0;        // fixed window; 0 = depth-based per h
    RadialChainOptions chain;  // WKB construction controls
};

// Lowest k eigenvalues of N_{h,m} on n and 2n+... nodes with Richardson
// extrapolation in the actual mesh-width ratio.
struct ExtrapolatedEigenvalues {
    std::vector<double> coarse, fine, extrapolated;
    int n_coarse = 0, n_fine = 0;
    double rho_max = 0;
};
ExtrapolatedEigenvalues radial_eigenvalues(const RadialField& field, double h, int m, int k, int n_grid,
                                           double rho_max);

// |lambda_0(N_{h,m}) - h sum_{j<=J} mu_j h^j| with the WKB coefficients; target
// slope J+2, passing when the slope is at least target - tolerance.
VerificationReport eigenvalue_expansion(const RadialField& field, int m, int J, const std::vector<double>& h_list,
                                        const RadialSweepOptions& opts = {}, double tolerance = 0.3);

// ||(N_{h,m} - lambda^J) Psi^J|| / ||Psi^J||, target slope J+2.
VerificationReport residual_scaling(const RadialField& field, int m, int J, const std::vector<double>& h_list,
                                    const RadialSweepOptions& opts = {}, double tolerance = 0.3);

// ||e^{eps phi/h} psi|| / ||psi|| for the computed ground state.
VerificationReport agmon_check(const RadialField& field, int m, const std::vector<double>& h_list, double epsilon,
                               const RadialSweepOptions& opts = {});

// ||e^{eps phi/h} (Psi^J - Gamma_m Psi^J)|| / ||Psi^J||, target slope J+1.
VerificationReport weighted_approximation(const RadialField& field, int m, int J, const std::vector<double>& h_list,
                                          double epsilon, const RadialSweepOptions& opts = {},
                                          double tolerance = 0.3);

// Lowest eigenvalues of the model operator against (2k+1+|m|-m) beta0.
VerificationReport model_spectrum_check(int m, double beta0, int n_grid, int count = 3, double rel_tol = 1e-4);

// Matches the lowest 2D eigenvalues to the fiber ground energies lambda_0(N_{h,m}).
struct FiberIdentification {
    std::vector<double> plane_fine, plane_coarse;  // 2D eigenvalues on n and about n/2 nodes
    std::vector<double> tolerance;                 // |fine - coarse|
    std::vector<double> fiber;                     // lambda_0(N_{h,m}), m = 0..m_max
    std::vector<int> permutation;                  // matched fiber index per 2D eigenvalue
    std::vector<int> angular_mode;                 // dominant |angular Fourier mode| per 2D eigenvector
    double ground_mode0_fraction = 0;              // angular power of the ground state in mode 0
    double boundary_mass = 0;
    bool resolved = false;
    bool identity = false;
    bool within_tolerance = false;
};
struct PlaneSweepOptions {
    int n_grid = 161;
    PlaneBox box;
    int fiber_n_grid = 20000;
    double fiber_depth = 40;
};
FiberIdentification fiber_identification(const RadialField& field, double h, int m_max, int k_max,
                                         const PlaneSweepOptions& opts = {});
VerificationReport fiber_report(const FiberIdentification& f, double h);

VerificationReport laguerre_report(const LaguerreSuiteResult& r, double identity_tol = 1e-12,
                                   double norm_tol = 1e-10);

// Angular Fourier power of a plane eigenvector on the circle |q| = radius.
std::vector<double> angular_spectrum(const OperatorMatrix& op, const EigenPair& pair, double radius, int samples = 64);

}  // namespace magwkb
