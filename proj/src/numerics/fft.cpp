#include "typlab/numerics/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <string>

#include "typlab/errors.hpp"

namespace typlab {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Per-thread extended-precision scratch, aligned the way FFTW expects.
fftwl_complex* scratch(std::size_t n) {
  struct Buffer {
    fftwl_complex* data = nullptr;
    std::size_t size = 0;
    ~Buffer() { fftwl_free(data); }
  };
  thread_local Buffer buffer;
  if (buffer.size < n) {
    fftwl_free(buffer.data);
    buffer.data = static_cast<fftwl_complex*>(fftwl_malloc(sizeof(fftwl_complex) * n));
    if (buffer.data == nullptr) throw std::bad_alloc();
    buffer.size = n;
  }
  return buffer.data;
}

}  // namespace

struct Fft::Plans {
  fftwl_plan forward = nullptr;
  fftwl_plan inverse = nullptr;

  ~Plans() {
    const std::lock_guard lock(planner_mutex());
    if (forward) fftwl_destroy_plan(forward);
    if (inverse) fftwl_destroy_plan(inverse);
  }
};

Fft::Fft(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw ConfigError("FFT length must be a power of two, got " + std::to_string(n));
  }
  auto plans = std::make_shared<Plans>();
  {
    const std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE never times candidate algorithms, so the plan (and every
    // result bit) is the same on each run.
    fftwl_complex* buf = static_cast<fftwl_complex*>(fftwl_malloc(sizeof(fftwl_complex) * n));
    if (buf == nullptr) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    plans->forward = fftwl_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plans->inverse = fftwl_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftwl_free(buf);
  }
  if (!plans->forward || !plans->inverse) {
    throw NumericalError("FFTW could not plan a length-" + std::to_string(n) + " transform");
  }
  plans_ = std::move(plans);
}

void Fft::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_) throw ConfigError("FFT input length mismatch");
  fftwl_complex* work = scratch(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    work[i][0] = data[i].real();
    work[i][1] = data[i].imag();
  }
  fftwl_execute_dft(inverse ? plans_->inverse : plans_->forward, work, work);
  const long double scale = inverse ? 1.0L / static_cast<long double>(n_) : 1.0L;
  for (std::size_t i = 0; i < n_; ++i) {
    data[i] = Complex(static_cast<double>(work[i][0] * scale), static_cast<double>(work[i][1] * scale));
  }
}

void Fft::transform_2d(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_ * n_) throw ConfigError("2D FFT input size mismatch");
  for (std::size_t row = 0; row < n_; ++row) transform(data.subspan(row * n_, n_), inverse);
  std::vector<Complex> column(n_);
  for (std::size_t col = 0; col < n_; ++col) {
    for (std::size_t row = 0; row < n_; ++row) column[row] = data[row * n_ + col];
    transform(column, inverse);
    for (std::size_t row = 0; row < n_; ++row) data[row * n_ + col] = column[row];
  }
}

void Fft::forward(std::span<Complex> data) const { transform(data, false); }
void Fft::inverse(std::span<Complex> data) const { transform(data, true); }
void Fft::forward_2d(std::span<Complex> data) const { transform_2d(data, false); }
void Fft::inverse_2d(std::span<Complex> data) const { transform_2d(data, true); }

namespace {

ComplexField transform_field(const ComplexField& field, bool inverse) {
  const Fft fft(field.grid().points());
  ComplexField out = field;
  if (field.grid().dimension() == 1) {
    inverse ? fft.inverse(out.values()) : fft.forward(out.values());
  } else {
    inverse ? fft.inverse_2d(out.values()) : fft.forward_2d(out.values());
  }
  return out;
}

}  // namespace

ComplexField dft_forward(const ComplexField& field) { return transform_field(field, false); }
ComplexField dft_inverse(const ComplexField& field) { return transform_field(field, true); }

}  // namespace typlab
