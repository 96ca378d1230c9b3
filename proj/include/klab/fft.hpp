#pragma once

#include <complex>
#include <vector>

#include "klab/lattice.hpp"

namespace klab {

// Cached FFTW c2c transforms for a lattice. Plans use FFTW_ESTIMATE so that
// planning is deterministic; data is staged through an internal buffer.
class Fft {
public:
    explicit Fft(const Lattice& lat);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<std::complex<double>>& data) const;   // unnormalized
    void backward(std::vector<std::complex<double>>& data) const;  // divides by N

    // shared per-resolution instance
    static const Fft& get(const Lattice& lat);

private:
    struct Impl;
    Impl* impl_;
};

}  // namespace klab
