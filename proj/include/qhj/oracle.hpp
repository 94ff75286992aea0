#pragma once

#include "qhj/catalog.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace qhj {

// cell_natural: cell-centred nodes, zero-flux walls; used with a weight vanishing at the walls.
enum class GridBc { dirichlet, periodic, antiperiodic, cell_natural };

const char* to_string(GridBc bc);

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int points = 512;
    GridBc bc = GridBc::dirichlet;

    double spacing() const;
    // Unknowns' positions: interior nodes (dirichlet), lo + i h (periodic), cell centres (cell_natural).
    std::vector<double> nodes() const;
    // Same interval with the spacing halved.
    GridSpec refined() const;
};

struct OracleSpectrum {
    // Richardson-extrapolated eigenvalues; sorted ascending in the Hermitian case.
    std::vector<cplx> eigenvalues;
    // |extrapolated - fine| per eigenvalue.
    std::vector<double> error_estimates;
    // Eigenvectors on the refined grid, one per eigenvalue.
    std::vector<std::vector<cplx>> eigenvectors;
    // Grid parameter of the refined grid (the contour parameter for complex contours).
    std::vector<double> xs;
    // Sign changes per state (Hermitian case only).
    std::vector<int> node_counts;
    std::vector<GridBc> bc;
    bool hermitian = true;
    // Every eigenvalue is real or has its conjugate in the list, to 1e-8 relative.
    bool conjugate_closed = false;
    // Largest ||H psi - E psi|| / ||psi|| on the refined grid.
    double max_residual = 0.0;
};

// Real problem -(w u')' + q w u = E w u; w == nullptr means w = 1.
struct SturmLiouville {
    std::function<double(double)> q;
    std::function<double(double)> w;
};

// Lowest k eigenpairs of the central-difference operator on grid and on grid.refined(), extrapolated.
// Throws Error(grid_too_coarse) if an error estimate exceeds tol.
OracleSpectrum solve_sturm_liouville(const SturmLiouville& problem, const GridSpec& grid, int k,
                                     double tol = std::numeric_limits<double>::infinity());

// -psi'' + V psi = E psi with the model's potential, real part taken; Dirichlet walls.
OracleSpectrum solve_bound(const PotentialModel& model, const GridSpec& grid, int k,
                           double tol = std::numeric_limits<double>::infinity());

// Union of periodic and antiperiodic spectra on one cell [lo, lo + period); k states from each.
OracleSpectrum solve_band_edges(const PotentialModel& model, const GridSpec& grid, int k,
                                double tol = std::numeric_limits<double>::infinity());

// Map from the grid parameter u to complex x, and dx/du.
struct Contour {
    std::function<cplx(double)> x;
    std::function<cplx(double)> dx;
};

Contour real_line();
// Contour along which the model's PT states decay (the real line unless the model needs a tilt).
Contour default_contour(const PotentialModel& model);

// Dense complex eigen-solve on grid and grid.refined(), Dirichlet walls, points <= 800 on the refined grid.
// With predictions, the eigenvalue nearest each prediction is kept; otherwise the k with smallest real part.
OracleSpectrum solve_pt(const PotentialModel& model, const GridSpec& grid, int k, const std::vector<cplx>& predictions = {},
                        const Contour& contour = Contour{});

// Strict sign changes, ignoring samples below 1e-10 max|v|.
int count_nodes(const std::vector<double>& v);
int count_nodes(const std::vector<cplx>& v);

// fine + (fine - coarse) / (2^order - 1)
double richardson(double coarse, double fine, int order = 2);
cplx richardson(cplx coarse, cplx fine, int order = 2);

// Concurrency cap from QHJ_NUM_THREADS (default: hardware concurrency).
unsigned max_threads();

}  // namespace qhj
