#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nahmlab/series.hpp"

namespace nahmlab {

// (sign q^r; q^base)_length with sign +1 meaning factors (1 - q^(r + k*base))
// and sign -1 meaning (1 + q^(r + k*base)). length nullopt = infinite.
struct PochhammerAtom {
  int sign = 1;
  Rational r;
  Rational base{1};
  std::optional<std::int64_t> length;
};
struct JAtom { std::int64_t m; };                  // (q^m; q^m)_inf
struct JamAtom { std::int64_t a, m; };             // (q^a, q^(m-a), q^m; q^m)_inf
struct GenEtaAtom { std::int64_t delta, g; };      // generalized eta
struct EtaAtom {};
enum class WeberKind { f, f1, f2 };
struct WeberAtom { WeberKind kind; };
struct Theta2Atom {};
struct Theta3Atom {};
struct PartialThetaAtom {
  Rational j;
  Rational k;
  bool alternating = false;  // false: sum (2kn+j) q^(...); true: with (-1)^n
};
struct QPowAtom { Rational r; };
struct ConstAtom { Rational c; };

// Named atom implemented outside this module (Nahm sums, characters, ...).
struct Extension {
  std::string name;
  bool takes_arguments = true;
  // throws DomainError on bad arguments
  std::function<void(std::string_view args)> validate;
  std::function<QSeries(std::string_view args, Exponent depth)> expand;
  // lower bound for the leading exponent
  std::function<Exponent(std::string_view args)> valuation;
};

struct ExtensionAtom {
  std::shared_ptr<const Extension> ext;
  std::string args;
};

using ProductAtom = std::variant<PochhammerAtom, JAtom, JamAtom, GenEtaAtom, EtaAtom, WeberAtom, Theta2Atom,
                                 Theta3Atom, PartialThetaAtom, QPowAtom, ConstAtom, ExtensionAtom>;

class Registry {
 public:
  void add(Extension e);
  std::shared_ptr<const Extension> find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::shared_ptr<const Extension>, std::less<>> table_;
};

// Registry with only the grammar's own atoms.
const Registry& empty_registry();

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Atom, Number, Add, Sub, Mul, Div, Pow, Neg, Subst, TauShift, Dissect };
  Kind kind = Kind::Number;
  ProductAtom atom = ConstAtom{Rational(0)};
  Rational number{0};          // Number value; Subst power
  std::int64_t power = 0;      // Pow exponent; Dissect modulus
  std::int64_t residue = 0;    // Dissect residue
  std::vector<ExprPtr> args;
  std::size_t column = 0;
};

ExprPtr parse(std::string_view text, const Registry& registry = empty_registry());
std::size_t count_atoms(const Expr& e);
std::string to_string(const Expr& e);
std::string to_string(const ProductAtom& a);

// ---- expansion ----

// Validates atom parameters (also done by the parser).
void validate_atom(const ProductAtom& a);

QSeries pochhammer(int sign, const Rational& r, const Rational& base, std::optional<std::int64_t> length, Exponent depth);
QSeries expand_atom(const ProductAtom& a, Exponent depth);
// Lower bound for the leading exponent of an atom.
Exponent atom_valuation(const ProductAtom& a);
QSeries expand(const Expr& e, Exponent depth);
QSeries expand(std::string_view text, Exponent depth, const Registry& registry = empty_registry());

// Exponent of the eta-type prefactor: delta/2 * P2(g/delta).
Rational generalized_eta_prefactor(std::int64_t delta, std::int64_t g);
// Second periodic Bernoulli polynomial {t}^2 - {t} + 1/6.
Rational bernoulli_p2(const Rational& t);

// c * q^shift * prod (1 + sign_i q^(e_i))^(mult_i) with every e_i > 0.
struct LinearFactor {
  int sign;
  Rational e;
  std::int64_t mult;
};
struct FactoredProduct {
  Rational coeff{1};
  Rational shift{0};
  std::vector<LinearFactor> factors;
};

// Factor list of a product atom, keeping factors with exponent below span;
// nullopt when the atom is not a product of binomials.
std::optional<FactoredProduct> factor_atom(const ProductAtom& a, const Rational& span);

// Expand a factored product to absolute depth using dense binomial updates.
QSeries expand_factored(const FactoredProduct& p, Exponent depth);

}  // namespace nahmlab
