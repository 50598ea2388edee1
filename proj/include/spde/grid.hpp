#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace spde {

struct Domain1D {
    double x0 = 0.0;
    double x1 = 1.0;
    double length() const { return x1 - x0; }
};

struct Domain2D {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
};

/// Uniform nodal grid function on an interval, extended by zero outside.
class GridFunction1D {
public:
    GridFunction1D() = default;
    GridFunction1D(Domain1D domain, int nodes);
    GridFunction1D(Domain1D domain, std::vector<double> values);

    const Domain1D& domain() const { return domain_; }
    int nodes() const { return static_cast<int>(values_.size()); }
    double dx() const { return dx_; }
    double node_x(int i) const { return domain_.x0 + i * dx_; }

    double& operator[](int i) { return values_[i]; }
    double operator[](int i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Linear interpolation inside the domain, zero outside.
    double sample_extended(double x) const;

    double lp_distance(const GridFunction1D& other, int p) const;

private:
    Domain1D domain_;
    double dx_ = 0.0;
    std::vector<double> values_;
};

/// Uniform nodal grid function on an axis-aligned rectangle.
class GridFunction2D {
public:
    GridFunction2D() = default;
    GridFunction2D(Domain2D domain, int nodes_x, int nodes_y);

    const Domain2D& domain() const { return domain_; }
    int nodes_x() const { return nx_; }
    int nodes_y() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double node_x(int i) const { return domain_.x0 + i * dx_; }
    double node_y(int j) const { return domain_.y0 + j * dy_; }

    double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * nx_ + i]; }
    double at(int i, int j) const {
        return values_[static_cast<std::size_t>(j) * nx_ + i];
    }

    /// Bilinear interpolation inside, zero outside.
    double sample_extended(double x, double y) const;

private:
    Domain2D domain_;
    int nx_ = 0, ny_ = 0;
    double dx_ = 0.0, dy_ = 0.0;
    std::vector<double> values_;
};

void save_grid_function(const GridFunction1D& f, std::ostream& os);
GridFunction1D load_grid_function(std::istream& is);

/// Closed-form adapter over grid data, for initial conditions supplied as a
/// GridFunction (interpolated inside the domain, zero outside).
std::function<double(double)> initial_from_grid(GridFunction1D f);

} // namespace spde
