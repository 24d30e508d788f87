#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nahmlab/series.hpp"

namespace nahmlab {

using ComplexMatrix = std::vector<std::vector<BigComplex>>;

// Components F with F(-1/tau) = (-i tau)^weight S F(tau) and F(tau+1) = T F(tau).
struct VVMFDescriptor {
  std::string name;
  std::vector<std::string> labels;
  std::vector<QSeries> components;
  Rational weight{0};
  ComplexMatrix S;
  ComplexMatrix T;
  // for matrices assembled from other representations: how far the assembly
  // is from an exact intertwiner (zero when S is given directly)
  std::optional<BigFloat> assembly_residual;
};

struct Evaluation {
  BigComplex value;
  BigFloat tail;  // estimated size of the omitted terms
};

// Sum of c q^e at q^e = exp(2 pi i e tau). The tail estimate is
// max|c| |q|^N / (1 - |q|^(1/D)) for truncation N and exponent step 1/D;
// it must stay below tol (default 2^-prec times max(1, |value|)).
Evaluation evaluate(const QSeries& s, const BigComplex& tau, mpfr_prec_t prec,
                    const std::optional<BigFloat>& tol = std::nullopt);

// (-i tau)^w on the principal branch
BigComplex automorphy(const BigComplex& tau, const Rational& weight, mpfr_prec_t prec);
BigComplex s_action(const BigComplex& tau);  // -1/tau

struct ResidualReport {
  std::string descriptor;
  std::string check;  // "S" or "T"
  std::string tau;
  BigFloat residual;
  BigFloat tol;
  bool pass = false;
};

nlohmann::json to_json(const ResidualReport& r);

ResidualReport check_S(const VVMFDescriptor& d, const BigComplex& tau, const BigFloat& tol, mpfr_prec_t prec);
ResidualReport check_T(const VVMFDescriptor& d, const BigComplex& tau, const BigFloat& tol, mpfr_prec_t prec);

// Values of the components at one point.
using ImageFn = std::function<std::vector<BigComplex>(const BigComplex& tau)>;

struct ClosureReport {
  std::string id;
  std::size_t samples = 0;
  BigFloat gram;      // determinant of the column-normalized Gram matrix
  BigFloat residual;  // worst fitted image error
  BigFloat tol;
  bool well_conditioned = false;
  bool pass = false;
};

nlohmann::json to_json(const ClosureReport& r);

// Fits image(tau) = M span(tau) by least squares over the sample points and
// reports the worst misfit. Needs at least 2 dim samples.
ClosureReport closure_check(const std::string& id, const std::vector<QSeries>& span, const ImageFn& image,
                            const std::vector<BigComplex>& samples, const BigFloat& tol, mpfr_prec_t prec);

// The given points padded with a fixed grid until there are `count`.
std::vector<BigComplex> closure_samples(const std::vector<BigComplex>& given, std::size_t count, mpfr_prec_t prec);

// tau -> (-i tau)^-w F(-1/tau), tau -> F(tau+1)
ImageFn s_image(const VVMFDescriptor& d, mpfr_prec_t prec);
ImageFn t_image(const VVMFDescriptor& d, mpfr_prec_t prec);

VVMFDescriptor weber_descriptor(Exponent depth, mpfr_prec_t prec);
VVMFDescriptor rho1_descriptor(Exponent depth, mpfr_prec_t prec);
// printed_entry33 flips the sign of the (3,3) entry (the misprint in the
// literature matrix); used as a negative control
VVMFDescriptor rho2_descriptor(Exponent depth, mpfr_prec_t prec, bool printed_entry33 = false);
// q^lambda F_1..F_6 with S assembled from the Weber, rho1 and rho2 laws
VVMFDescriptor rho_tilde_descriptor(Exponent depth, mpfr_prec_t prec);
// Partial thetas of weight 3/2 for k in N + 1/2: dtheta_j (j = 1..2k-1),
// dtheta_(j-1/2) (j = 1..2k), dg_j (j = 1..2k-1). printed_phase uses
// exp(i pi j (2j'-1)/k) in the dg -> dtheta block instead of /(2k).
VVMFDescriptor theta_descriptor(const Rational& k, Exponent depth, mpfr_prec_t prec, bool printed_phase = false);

// also theta:K and theta-printed:K
VVMFDescriptor descriptor_by_name(const std::string& name, Exponent depth, mpfr_prec_t prec);
std::vector<std::string> descriptor_names();

BigComplex parse_tau(std::string_view text, mpfr_prec_t prec);  // "re,im" or complex literal
std::string tau_to_string(const BigComplex& tau);

}  // namespace nahmlab
