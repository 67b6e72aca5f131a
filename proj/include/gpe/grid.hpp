#pragma once

// Periodic rectangle discretization and the complex field living on it.
//
// The domain [a,b]x[c,d] carries an nx-by-ny uniform grid whose right/top
// endpoints are excluded: node (ix, iy) sits at (a + ix*dx, c + iy*dy) and
// the b/d edges are identified with a/c. All integral quadratures below are
// plain rectangle rules, which are spectrally accurate for smooth periodic
// integrands on this layout.

#include <complex>
#include <cstddef>
#include <vector>

namespace gpe {

struct GridSpec {
    double a = -8.0;  // x lower bound
    double b = 8.0;   // x upper bound (excluded node, identified with a)
    double c = -8.0;  // y lower bound
    double d = 8.0;   // y upper bound (excluded node, identified with c)
    int nx = 256;
    int ny = 256;

    double dx() const { return (b - a) / nx; }
    double dy() const { return (d - c) / ny; }
    double x(int ix) const { return a + ix * dx(); }
    double y(int iy) const { return c + iy * dy(); }
    std::size_t num_nodes() const { return static_cast<std::size_t>(nx) * ny; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Validates bounds ordering and the even, positive point counts required by
// the symmetric wavenumber layout; throws std::invalid_argument otherwise.
GridSpec make_grid(double a, double b, double c, double d, int nx, int ny);

// Complex samples on a GridSpec, row-major with x varying fastest:
// values[iy*nx + ix] is the sample at node (ix, iy).
struct Field2D {
    GridSpec grid;
    std::vector<std::complex<double>> values;

    std::complex<double>& at(int ix, int iy) {
        return values[static_cast<std::size_t>(iy) * grid.nx + ix];
    }
    const std::complex<double>& at(int ix, int iy) const {
        return values[static_cast<std::size_t>(iy) * grid.nx + ix];
    }
};

// Field with the right storage size, zero-initialized.
Field2D make_field(const GridSpec& grid);

// Node coordinates along each axis (sizes nx and ny).
struct Coordinates {
    std::vector<double> x;
    std::vector<double> y;
};
Coordinates coordinates(const GridSpec& grid);

// Angular wavenumbers (radians per unit length) in DFT bin order:
// kx[j] = 2*pi*f(j)/(b-a) with f(j) = j for j < nx/2 and f(j) = j - nx
// otherwise, so kx[0] = 0 and max |kx| = pi*nx/(b-a); analogously ky.
struct WaveNumbers {
    std::vector<double> kx;
    std::vector<double> ky;
};
WaveNumbers wavenumbers(const GridSpec& grid);

// sqrt( sum |values|^2 * dx*dy ): the discrete L2 norm, whose square is the
// conserved mass of the solver.
double l2_norm(const Field2D& f);

}  // namespace gpe
