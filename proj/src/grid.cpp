#include "spde/grid.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spde/errors.hpp"

namespace spde {

GridFunction1D::GridFunction1D(Domain1D domain, int nodes)
    : domain_(domain), values_(static_cast<std::size_t>(nodes), 0.0) {
    if (nodes < 2 || !(domain.x1 > domain.x0)) {
        throw InvalidParameterError("GridFunction1D: need >= 2 nodes on a proper interval");
    }
    dx_ = domain.length() / (nodes - 1);
}

GridFunction1D::GridFunction1D(Domain1D domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
    if (values_.size() < 2 || !(domain.x1 > domain.x0)) {
        throw InvalidParameterError("GridFunction1D: need >= 2 nodes on a proper interval");
    }
    dx_ = domain.length() / (static_cast<int>(values_.size()) - 1);
}

double GridFunction1D::sample_extended(double x) const {
    if (x < domain_.x0 || x > domain_.x1) return 0.0;
    const double s = (x - domain_.x0) / dx_;
    const int i = std::min(static_cast<int>(s), nodes() - 2);
    const double w = s - i;
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double GridFunction1D::lp_distance(const GridFunction1D& other, int p) const {
    // trapezoid on the shared grid
    double acc = 0.0;
    for (int i = 0; i < nodes(); ++i) {
        const double d = std::abs(values_[i] - other.values_[i]);
        const double term = (p == 1) ? d : d * d;
        acc += (i == 0 || i == nodes() - 1) ? 0.5 * term : term;
    }
    acc *= dx_;
    return (p == 1) ? acc : std::sqrt(acc);
}

GridFunction2D::GridFunction2D(Domain2D domain, int nodes_x, int nodes_y)
    : domain_(domain),
      nx_(nodes_x),
      ny_(nodes_y),
      values_(static_cast<std::size_t>(nodes_x) * nodes_y, 0.0) {
    if (nodes_x < 2 || nodes_y < 2 || !(domain.x1 > domain.x0) ||
        !(domain.y1 > domain.y0)) {
        throw InvalidParameterError("GridFunction2D: degenerate grid");
    }
    dx_ = (domain.x1 - domain.x0) / (nodes_x - 1);
    dy_ = (domain.y1 - domain.y0) / (nodes_y - 1);
}

double GridFunction2D::sample_extended(double x, double y) const {
    if (x < domain_.x0 || x > domain_.x1 || y < domain_.y0 || y > domain_.y1) {
        return 0.0;
    }
    const double sx = (x - domain_.x0) / dx_;
    const double sy = (y - domain_.y0) / dy_;
    const int i = std::min(static_cast<int>(sx), nx_ - 2);
    const int j = std::min(static_cast<int>(sy), ny_ - 2);
    const double wx = sx - i;
    const double wy = sy - j;
    return (1.0 - wx) * (1.0 - wy) * at(i, j) + wx * (1.0 - wy) * at(i + 1, j) +
           (1.0 - wx) * wy * at(i, j + 1) + wx * wy * at(i + 1, j + 1);
}

void save_grid_function(const GridFunction1D& f, std::ostream& os) {
    char buf[32];
    os << "# spde-gridfunction v1\n";
    std::snprintf(buf, sizeof(buf), "%.17g", f.domain().x0);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", f.domain().x1);
    os << buf << ',' << f.nodes() << '\n';
    for (int i = 0; i < f.nodes(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", f[i]);
        os << buf << '\n';
    }
}

std::function<double(double)> initial_from_grid(GridFunction1D f) {
    return [f = std::move(f)](double x) { return f.sample_extended(x); };
}

GridFunction1D load_grid_function(std::istream& is) {
    std::string line;
    Domain1D dom;
    int nodes = 0;
    bool have_header = false;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            std::istringstream ss(line);
            char comma;
            ss >> dom.x0 >> comma >> dom.x1 >> comma >> nodes;
            if (!ss) throw ConfigError("grid function: bad header line");
            values.reserve(static_cast<std::size_t>(nodes));
            have_header = true;
        } else {
            values.push_back(std::stod(line));
        }
    }
    if (!have_header || static_cast<int>(values.size()) != nodes) {
        throw ConfigError("grid function: truncated file");
    }
    return GridFunction1D(dom, std::move(values));
}

} // namespace spde
