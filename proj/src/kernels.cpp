// Copyright 2026 The hetnet-ee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetnet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hetnet::kernels {

std::string_view to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(HETNET_HAVE_AVX2)
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok;
#else
  return false;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("HETNET_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && avx2_available()) return Backend::Avx2;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{initial_backend()};
  return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available())
    throw std::invalid_argument("set_backend: AVX2 kernels are not available on this build or CPU");
  backend_slot().store(b, std::memory_order_relaxed);
}

LosShape los_shape(const LosModel& model) {
  LosShape s;
  if (const auto* m = std::get_if<los::Exponential>(&model)) {
    s.kind = LosShape::Kind::Exponential;
    s.kappa = m->kappa;
  } else if (const auto* m = std::get_if<los::ThreeGppLinear>(&model)) {
    s.kind = LosShape::Kind::Linear;
    s.d1 = m->d1;
  } else if (const auto* m = std::get_if<los::ThreeGppTwoPiece>(&model)) {
    s.kind = LosShape::Kind::TwoPiece;
    s.d0 = m->d0;
    s.d1 = m->d1;
    s.p1 = los_probability(model, m->d1);
  }
  return s;
}

double density_sum(const LosShape& shape, Link link, const double* scale, const double* coef, std::size_t n,
                   double t) {
  if (active_backend() == Backend::Avx2) return avx2::density_sum(shape, link, scale, coef, n, t);
  return scalar::density_sum(shape, link, scale, coef, n, t);
}

double moment_sum(const LosShape& shape, Link link, const double* scale, const double* weight, std::size_t n,
                  double t) {
  if (active_backend() == Backend::Avx2) return avx2::moment_sum(shape, link, scale, weight, n, t);
  return scalar::moment_sum(shape, link, scale, weight, n, t);
}

void received_powers(const LosShape& shape, const TierDraw& tier, const PowerColumns& cols, std::size_t n) {
  if (active_backend() == Backend::Avx2) return avx2::received_powers(shape, tier, cols, n);
  scalar::received_powers(shape, tier, cols, n);
}

#if !defined(HETNET_HAVE_AVX2)
namespace avx2 {
[[noreturn]] static void unavailable() { throw std::logic_error("AVX2 kernels were not compiled in"); }
double density_sum(const LosShape&, Link, const double*, const double*, std::size_t, double) { unavailable(); }
double moment_sum(const LosShape&, Link, const double*, const double*, std::size_t, double) { unavailable(); }
void received_powers(const LosShape&, const TierDraw&, const PowerColumns&, std::size_t) { unavailable(); }
}  // namespace avx2
#endif

}  // namespace hetnet::kernels
