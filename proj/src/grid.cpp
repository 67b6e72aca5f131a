#include "gpe/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gpe {

GridSpec make_grid(double a, double b, double c, double d, int nx, int ny) {
    if (!(b > a)) throw std::invalid_argument("grid: require b > a");
    if (!(d > c)) throw std::invalid_argument("grid: require d > c");
    if (nx < 2 || nx % 2 != 0)
        throw std::invalid_argument("grid: nx must be even and >= 2, got " + std::to_string(nx));
    if (ny < 2 || ny % 2 != 0)
        throw std::invalid_argument("grid: ny must be even and >= 2, got " + std::to_string(ny));
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw std::invalid_argument("grid: bounds must be finite");
    return GridSpec{a, b, c, d, nx, ny};
}

Field2D make_field(const GridSpec& grid) {
    return Field2D{grid, std::vector<std::complex<double>>(grid.num_nodes())};
}

Coordinates coordinates(const GridSpec& grid) {
    Coordinates co;
    co.x.resize(grid.nx);
    co.y.resize(grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix) co.x[ix] = grid.x(ix);
    for (int iy = 0; iy < grid.ny; ++iy) co.y[iy] = grid.y(iy);
    return co;
}

namespace {

std::vector<double> axis_wavenumbers(int n, double length) {
    std::vector<double> k(n);
    const double scale = 2.0 * M_PI / length;
    for (int j = 0; j < n; ++j) {
        const int f = (j < n / 2) ? j : j - n;
        k[j] = scale * f;
    }
    return k;
}

}  // namespace

WaveNumbers wavenumbers(const GridSpec& grid) {
    return WaveNumbers{axis_wavenumbers(grid.nx, grid.b - grid.a),
                       axis_wavenumbers(grid.ny, grid.d - grid.c)};
}

double l2_norm(const Field2D& f) {
    double sum = 0.0;
    for (const auto& v : f.values) sum += std::norm(v);
    return std::sqrt(sum * f.grid.dx() * f.grid.dy());
}

}  // namespace gpe
