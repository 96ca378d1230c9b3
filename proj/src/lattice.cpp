#include "klab/lattice.hpp"

#include "klab/errors.hpp"

namespace klab {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

std::shared_ptr<const Lattice> Lattice::make(int dim_c,
                                             const std::vector<double>& periods,
                                             const std::vector<int>& resolution) {
    if (dim_c != 1 && dim_c != 2)
        throw ConfigError("lattice: dim_c must be 1 or 2, got " + std::to_string(dim_c));
    const std::size_t d = 2 * static_cast<std::size_t>(dim_c);
    if (periods.size() != d)
        throw ConfigError("lattice: expected " + std::to_string(d) + " periods");
    if (resolution.size() != d)
        throw ConfigError("lattice: expected " + std::to_string(d) + " resolutions");
    for (double p : periods)
        if (!(p > 0)) throw ConfigError("lattice: periods must be positive");
    for (int r : resolution)
        if (r < 8 || !power_of_two(r))
            throw ConfigError("lattice: resolution " + std::to_string(r) +
                              " is not a power of two >= 8");

    auto lat = std::shared_ptr<Lattice>(new Lattice());
    lat->dim_c_ = dim_c;
    lat->periods_ = periods;
    lat->res_ = resolution;
    lat->nodes_ = 1;
    lat->volume_ = 1;
    for (std::size_t a = 0; a < d; ++a) {
        lat->nodes_ *= static_cast<std::size_t>(resolution[a]);
        lat->volume_ *= periods[a];
    }
    lat->stride_.assign(d, 1);
    for (int a = static_cast<int>(d) - 2; a >= 0; --a)
        lat->stride_[a] = lat->stride_[a + 1] * static_cast<std::size_t>(resolution[a + 1]);
    return lat;
}

std::vector<int> Lattice::unflatten(std::size_t node) const {
    const int d = real_dim();
    std::vector<int> c(d);
    for (int a = 0; a < d; ++a) {
        c[a] = static_cast<int>(node / stride_[a]);
        node %= stride_[a];
    }
    return c;
}

std::size_t Lattice::flatten(const std::vector<int>& coords) const {
    std::size_t node = 0;
    for (std::size_t a = 0; a < coords.size(); ++a) {
        int c = coords[a] % res_[a];
        if (c < 0) c += res_[a];
        node += stride_[a] * static_cast<std::size_t>(c);
    }
    return node;
}

double Lattice::coord(std::size_t node, int axis) const {
    std::size_t idx = (node / stride_[axis]) % static_cast<std::size_t>(res_[axis]);
    return static_cast<double>(idx) * spacing(axis);
}

bool Lattice::same_as(const Lattice& other) const {
    return dim_c_ == other.dim_c_ && periods_ == other.periods_ && res_ == other.res_;
}

}  // namespace klab
