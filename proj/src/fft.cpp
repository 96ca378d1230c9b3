#include "klab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace klab {

struct Fft::Impl {
    std::size_t n = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    mutable std::mutex mu;  // plans share buf
};

Fft::Fft(const Lattice& lat) : impl_(new Impl) {
    impl_->n = lat.nodes();
    impl_->buf = fftw_alloc_complex(impl_->n);
    std::vector<int> dims(lat.resolutions().begin(), lat.resolutions().end());
    impl_->fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), impl_->buf,
                               impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), impl_->buf,
                               impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf);
    delete impl_;
}

void Fft::forward(std::vector<std::complex<double>>& data) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    std::memcpy(impl_->buf, data.data(), impl_->n * sizeof(fftw_complex));
    fftw_execute(impl_->fwd);
    std::memcpy(data.data(), impl_->buf, impl_->n * sizeof(fftw_complex));
}

void Fft::backward(std::vector<std::complex<double>>& data) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    std::memcpy(impl_->buf, data.data(), impl_->n * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(impl_->n);
    auto* out = reinterpret_cast<std::complex<double>*>(impl_->buf);
    for (std::size_t i = 0; i < impl_->n; ++i) data[i] = out[i] * scale;
}

const Fft& Fft::get(const Lattice& lat) {
    static std::mutex mu;
    static std::map<std::vector<int>, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[lat.resolutions()];
    if (!slot) slot = std::make_unique<Fft>(lat);
    return *slot;
}

}  // namespace klab
