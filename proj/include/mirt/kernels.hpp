#pragma once

// Dense double-precision primitives behind the likelihood and EM hot paths:
// node-grid logit accumulation, log-sigmoid tables, posterior exponentials
// and their reductions. A scalar reference implementation and an AVX2+FMA
// variant share one function table; the active table is picked at runtime
// from CPU capabilities (override with set_active() or MIRT_KERNELS=scalar).
//
// Contract: the variants agree elementwise to a few ulps relative plus
// ~1e-15 absolute (the transcendentals use different polynomial cores).
// The scalar table is the reference the equivalence tests compare against.

#include <cstddef>

namespace mirt::kernels {

struct Backend {
  const char* name;

  void (*add)(const double* x, double* y, std::size_t n);                 // y += x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*dot3)(const double* w, const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);  // n >= 1

  // out[i] = 1 / (1 + exp(-z[i])), stable for any finite z
  void (*sigmoid)(const double* z, double* out, std::size_t n);
  // out[i] = log sigmoid(sign * z[i]) = -softplus(-sign * z[i])
  void (*log_sigmoid)(const double* z, double sign, double* out, std::size_t n);
  // out[i] = exp(v[i] + shift)
  void (*exp_shift)(const double* v, double shift, double* out, std::size_t n);
  // max(v) + log(sum exp(v - max)); -inf for all -inf input, n >= 1
  double (*log_sum_exp)(const double* v, std::size_t n);
};

const Backend& scalar_backend();

bool avx2_available();           // compiled in and supported by this CPU
const Backend& avx2_backend();   // only valid when avx2_available()

// Selected backend. Default: AVX2 when available, else scalar; the
// MIRT_KERNELS environment variable ("scalar" / "avx2") forces a choice.
const Backend& active();
void set_active(const Backend& b);
void reset_active();  // re-run the default selection

}  // namespace mirt::kernels
