#pragma once

#include <random>
#include <vector>

#include "plap/nonlinearity.hpp"

namespace fixtures {

// f(t) = t - t^3 on [0, 2]; increasing profile u = tanh(t / sqrt 2) toward 1
inline plap::NonlinearitySpec cubic_well() {
  return plap::NonlinearitySpec::create({0.0, 2.0}, {{0.0, 1.0, 0.0, -1.0}}, 2.0);
}

// f(t) = t - 1 on [0, 3]; periodic profile u = 1 - cos t with maximum 2
inline plap::NonlinearitySpec cosine_well() {
  return plap::NonlinearitySpec::create({0.0, 3.0}, {{-1.0, 1.0}}, 3.0);
}

// f(t) = t(1 - t) on [0, 2]; increasing profile toward 1, no closed form
inline plap::NonlinearitySpec logistic_well() {
  return plap::NonlinearitySpec::create({0.0, 2.0}, {{0.0, 1.0, -1.0}}, 2.0);
}

// f(t) = -1 + 4t - 3t^2 on [0, 2]: f(0) < 0, F(t) = -t(t-1)^2, so t = 1 is
// the zero with F(1) = 0 and F < 0 on (0, 1) (the zero-slope increasing case)
inline plap::NonlinearitySpec touching_well() {
  return plap::NonlinearitySpec::create({0.0, 2.0}, {{-1.0, 4.0, -3.0}}, 2.0);
}

// lambda^p-scaled copy of f (state rescaling that multiplies slopes by lambda)
inline plap::NonlinearitySpec scaled(const plap::NonlinearitySpec& f, double factor) {
  std::vector<std::vector<double>> pieces = f.pieces();
  for (auto& piece : pieces)
    for (double& c : piece) c *= factor;
  return plap::NonlinearitySpec::create(f.breakpoints(), pieces, f.cap());
}

// random piecewise-cubic nonlinearity, continuity-stitched, 1-3 pieces
inline plap::NonlinearitySpec random_piecewise_cubic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> npieces(1, 3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.4, 1.2);
  int K = npieces(rng);
  std::vector<double> bp{0.0};
  for (int k = 0; k < K; ++k) bp.push_back(bp.back() + width(rng));
  std::vector<std::vector<double>> pieces;
  double carry = coef(rng);
  for (int k = 0; k < K; ++k) {
    std::vector<double> piece{carry, coef(rng), coef(rng), coef(rng)};
    carry = plap::poly::eval(piece, bp[k + 1] - bp[k]);
    pieces.push_back(piece);
  }
  return plap::NonlinearitySpec::create(bp, pieces, bp.back());
}

}  // namespace fixtures
