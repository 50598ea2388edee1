#include "spde/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/quadrature.hpp"

namespace spde {

LevyMeasureSpec make_zero_levy() {
    LevyMeasureSpec s;
    s.name = "zero";
    s.kind = LevyMeasureSpec::Kind::zero;
    return s;
}

LevyMeasureSpec make_two_atom_levy(double z_up, double w_up, double z_down,
                                   double w_down, double delta) {
    LevyMeasureSpec s;
    s.name = "two_atom";
    s.kind = LevyMeasureSpec::Kind::finite_atoms;
    s.delta = delta;
    s.atoms = {{Mark{1.0, z_up}, w_up}, {Mark{1.0, z_down}, w_down}};
    for (const auto& a : s.atoms) {
        if (std::abs(a.z.size) <= delta) {
            throw InvalidParameterError("make_two_atom_levy: atom inside truncation radius");
        }
    }
    s.total_mass = w_up + w_down;
    s.residual_g2_fraction = 0.0; // atoms sit above the truncation radius
    return s;
}

LevyMeasureSpec make_power_levy(double alpha, double scale, double delta) {
    if (!(alpha > 0.0 && alpha < 2.0) || !(delta > 0.0 && delta < 1.0)) {
        throw InvalidParameterError("make_power_levy: need 0<alpha<2, 0<delta<1");
    }
    LevyMeasureSpec s;
    s.name = "power";
    s.kind = LevyMeasureSpec::Kind::power_density;
    s.alpha = alpha;
    s.scale = scale;
    s.delta = delta;
    // m_delta = scale * int_delta^1 z^(-1-alpha) dz
    s.total_mass = scale * (std::pow(delta, -alpha) - 1.0) / alpha;
    // residual second moment of g(z)=min(z,1)=z:   int_0^delta z^2 z^(-1-alpha) dz
    const double res = scale * std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
    const double tot = res + scale * (1.0 - std::pow(delta, 2.0 - alpha)) / (2.0 - alpha);
    s.residual_g2_fraction = res / tot;

    // 64-panel midpoint discretization of the truncated density, reused for
    // every z-integral (compensator cross-checks, entropy terms).
    const int n = 64;
    const double h = (1.0 - delta) / n;
    for (int i = 0; i < n; ++i) {
        const double z = delta + (i + 0.5) * h;
        s.atoms.push_back({Mark{1.0, z}, scale * std::pow(z, -1.0 - alpha) * h});
    }
    return s;
}

JumpCoefficient make_zero_jump_coefficient() {
    JumpCoefficient c;
    c.name = "zero";
    c.kind = JumpCoefficient::Kind::zero;
    c.lambda_star = 0.0;
    c.g = [](const Mark&) { return 0.0; };
    c.h = [](double) { return 0.0; };
    return c;
}

namespace {
double g_default(const Mark& z) { return std::min(std::abs(z.size), 1.0); }
} // namespace

JumpCoefficient make_linear_jump_coefficient(double lambda_star) {
    JumpCoefficient c;
    c.name = "linear";
    c.kind = JumpCoefficient::Kind::linear;
    c.lambda_star = lambda_star;
    c.g = g_default;
    c.h = [](double u) { return u; };
    return c;
}

JumpCoefficient make_tanh_jump_coefficient(double lambda_star) {
    JumpCoefficient c;
    c.name = "tanh";
    c.kind = JumpCoefficient::Kind::tanh_shaped;
    c.lambda_star = lambda_star;
    c.g = g_default;
    c.h = [](double u) { return std::tanh(u); };
    return c;
}

std::vector<double> sample_brownian(double horizon, int steps, std::uint64_t seed) {
    if (!(horizon > 0.0) || steps < 1) {
        throw InvalidParameterError("sample_brownian: need T > 0 and steps >= 1");
    }
    rng::Engine eng(seed);
    const double sd = std::sqrt(horizon / steps);
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (auto& v : out) v = sd * eng.normal();
    return out;
}

std::vector<Jump> sample_jumps(const LevyMeasureSpec& spec, double horizon,
                               std::uint64_t seed) {
    if (!(horizon > 0.0)) {
        throw InvalidParameterError("sample_jumps: need T > 0");
    }
    if (spec.total_mass <= 0.0) return {};
    rng::Engine eng(seed);
    const int count = eng.poisson(spec.total_mass * horizon);
    std::vector<Jump> jumps(static_cast<std::size_t>(count));
    for (auto& j : jumps) j.time = horizon * eng.uniform_pos();
    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& a, const Jump& b) { return a.time < b.time; });
    for (auto& j : jumps) {
        const double u = eng.uniform();
        if (spec.kind == LevyMeasureSpec::Kind::finite_atoms) {
            double acc = 0.0;
            j.mark = spec.atoms.back().z;
            for (const auto& atom : spec.atoms) {
                acc += atom.weight / spec.total_mass;
                if (u <= acc) {
                    j.mark = atom.z;
                    break;
                }
            }
        } else {
            // closed-form inverse CDF of z^(-1-alpha) on (delta, 1]
            const double da = std::pow(spec.delta, -spec.alpha);
            const double z = std::pow(da - u * (da - 1.0), -1.0 / spec.alpha);
            j.mark = Mark{1.0, z};
        }
    }
    return jumps;
}

NoisePath sample_noise_path(const LevyMeasureSpec& spec, double horizon, int steps,
                            std::uint64_t master_seed, std::uint64_t path_index) {
    NoisePath p;
    p.seed = master_seed;
    p.horizon = horizon;
    p.steps = steps;
    p.brownian_increments = sample_brownian(
        horizon, steps,
        rng::derive_stream_seed(master_seed, path_index, rng::StreamTag::brownian));
    p.jumps = sample_jumps(
        spec, horizon,
        rng::derive_stream_seed(master_seed, path_index, rng::StreamTag::jumps));
    return p;
}

double compensator_drift(const JumpCoefficient& coef, const LevyMeasureSpec& spec,
                         double u, double quad_tol) {
    if (!(quad_tol > 0.0)) {
        throw InvalidParameterError("compensator_drift: quad_tol must be positive");
    }
    if (coef.lambda_star == 0.0 || spec.total_mass <= 0.0) return 0.0;
    if (spec.kind == LevyMeasureSpec::Kind::finite_atoms) {
        double s = 0.0;
        for (const auto& atom : spec.atoms) s += coef.value(u, atom.z) * atom.weight;
        return s;
    }
    // density case: integrate nu(u; z) against the truncated density
    return quad::adaptive_simpson(
        [&](double z) {
            return coef.value(u, Mark{1.0, z}) * spec.scale *
                   std::pow(z, -1.0 - spec.alpha);
        },
        spec.delta, 1.0, quad_tol);
}

namespace {
void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}
} // namespace

void save_noise_path(const NoisePath& path, std::ostream& os) {
    os << "# spde-noisepath v1\n";
    os << "seed,horizon,steps,jumps\n";
    os << path.seed << ',';
    put(os, path.horizon);
    os << ',' << path.steps << ',' << path.jumps.size() << '\n';
    os << "# increments\n";
    for (double dw : path.brownian_increments) {
        put(os, dw);
        os << '\n';
    }
    os << "# jumps time,component,size\n";
    for (const auto& j : path.jumps) {
        put(os, j.time);
        os << ',';
        put(os, j.mark.component);
        os << ',';
        put(os, j.mark.size);
        os << '\n';
    }
}

NoisePath load_noise_path(std::istream& is) {
    NoisePath p;
    std::string line;
    int jump_count = 0;
    enum { header, increments, jumps } section = header;
    bool header_done = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("increments") != std::string::npos) section = increments;
            else if (line.find("jumps") != std::string::npos) section = jumps;
            continue;
        }
        if (section == header) {
            if (line.find("seed") == 0) continue; // column header line
            std::istringstream ss(line);
            char comma;
            ss >> p.seed >> comma >> p.horizon >> comma >> p.steps >> comma >> jump_count;
            if (!ss) throw ConfigError("noise path: bad header line");
            header_done = true;
        } else if (section == increments) {
            p.brownian_increments.push_back(std::stod(line));
        } else {
            std::istringstream ss(line);
            Jump j;
            char comma;
            ss >> j.time >> comma >> j.mark.component >> comma >> j.mark.size;
            if (!ss) throw ConfigError("noise path: bad jump line");
            p.jumps.push_back(j);
        }
    }
    if (!header_done || static_cast<int>(p.brownian_increments.size()) != p.steps ||
        static_cast<int>(p.jumps.size()) != jump_count) {
        throw ConfigError("noise path: truncated or inconsistent file");
    }
    std::sort(p.jumps.begin(), p.jumps.end(),
              [](const Jump& a, const Jump& b) { return a.time < b.time; });
    return p;
}

} // namespace spde
