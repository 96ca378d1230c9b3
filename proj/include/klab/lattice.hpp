#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace klab {

// Uniform periodic grid on a real 2n-torus with complex structure
// z_a = x_a + i y_a. Real axes are ordered x_0, y_0, x_1, y_1; fields are
// stored row-major over axes in that order (last axis fastest).
class Lattice {
public:
    static std::shared_ptr<const Lattice> make(int dim_c,
                                               const std::vector<double>& periods,
                                               const std::vector<int>& resolution);

    int dim_c() const { return dim_c_; }
    int real_dim() const { return 2 * dim_c_; }
    std::size_t nodes() const { return nodes_; }
    double period(int axis) const { return periods_[axis]; }
    int resolution(int axis) const { return res_[axis]; }
    double spacing(int axis) const { return periods_[axis] / res_[axis]; }
    // product of periods
    double volume() const { return volume_; }

    const std::vector<double>& periods() const { return periods_; }
    const std::vector<int>& resolutions() const { return res_; }

    // node index <-> per-axis coordinates
    std::vector<int> unflatten(std::size_t node) const;
    std::size_t flatten(const std::vector<int>& coords) const;
    // physical coordinate of a node along one axis
    double coord(std::size_t node, int axis) const;

    bool same_as(const Lattice& other) const;

private:
    Lattice() = default;
    int dim_c_ = 0;
    std::vector<double> periods_;
    std::vector<int> res_;
    std::vector<std::size_t> stride_;
    std::size_t nodes_ = 0;
    double volume_ = 0;
};

using LatticePtr = std::shared_ptr<const Lattice>;

}  // namespace klab
