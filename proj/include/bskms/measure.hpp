#pragma once

// Probability measures on the unit circle, restricted to the families the
// state constructions need closed-form moments for:
//   - Haar (normalized arc length),
//   - finite atomic measures whose atoms sit at exact rational angles,
//   - the uniform measure on the r-th roots of unity.
// The n-th moment is M_n = integral of z^n.  Moment indices routinely reach
// hundreds of digits (carried exponents grow like (c/d)^k), so all index
// arithmetic is exact: powers of a root of unity are reduced modulo the
// angle denominator before any floating-point evaluation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "words.hpp"

namespace bskms {

using Complex = std::complex<double>;

// Angle as an exact fraction of a full turn, reduced to 0 <= num < den.
struct RationalAngle {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static RationalAngle of(std::int64_t num, std::int64_t den) {
    if (den < 1) throw DomainError("angle denominator must be >= 1");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    return RationalAngle{num / g, den / g};
  }

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
};

struct Atom {
  RationalAngle angle;
  double weight = 0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Measure {
  enum class Kind { Haar, Atomic, RootsUniform };

  Kind kind = Kind::Haar;
  std::vector<Atom> atoms;     // Atomic only
  std::int64_t order = 1;      // RootsUniform only

  static Measure haar() { return Measure{}; }

  static Measure atomic(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("atomic measure needs atoms");
    double total = 0;
    for (const Atom& a : atoms) {
      if (a.weight < 0) throw DomainError("atom weights must be >= 0");
      total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw DomainError("atom weights must sum to 1");
    return Measure{Kind::Atomic, std::move(atoms), 1};
  }

  // Point mass at z = 1.
  static Measure point_mass() {
    return atomic({Atom{RationalAngle{0, 1}, 1.0}});
  }

  static Measure roots_uniform(std::int64_t order) {
    if (order < 1) throw DomainError("roots order must be >= 1");
    return Measure{Kind::RootsUniform, {}, order};
  }

  friend bool operator==(const Measure&, const Measure&) = default;
};

// e^{2 pi i * angle * n}, with the power reduced exactly mod the denominator.
inline Complex root_power(const RationalAngle& angle, const BigInt& n) {
  const std::int64_t q = angle.den;
  std::int64_t m = (n % q).convert_to<std::int64_t>();
  if (m < 0) m += q;
  const std::int64_t e =
      ((BigInt(angle.num) * m) % q).convert_to<std::int64_t>();
  const double turn = 2.0 * std::numbers::pi_v<double> *
                      (static_cast<double>(e) / static_cast<double>(q));
  return Complex(std::cos(turn), std::sin(turn));
}

// n-th moment; defined for all integers via M_{-n} = conj(M_n).
inline Complex moment(const Measure& mu, const BigInt& n) {
  switch (mu.kind) {
    case Measure::Kind::Haar:
      return n == 0 ? Complex(1, 0) : Complex(0, 0);
    case Measure::Kind::RootsUniform:
      return n % mu.order == 0 ? Complex(1, 0) : Complex(0, 0);
    case Measure::Kind::Atomic: {
      Complex acc(0, 0);
      for (const Atom& a : mu.atoms) acc += a.weight * root_power(a.angle, n);
      return acc;
    }
  }
  return Complex(0, 0);
}

// --- JSON interface -------------------------------------------------------
//
//   {"type":"haar"}
//   {"type":"roots","order":r}
//   {"type":"atomic","atoms":[{"angle":"p/q","weight":w}, ...]}

inline RationalAngle parse_angle(const std::string& text) {
  std::int64_t num = 0, den = 1;
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    num = std::stoll(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash))
      throw ParseError("bad angle '" + text + "'");
    if (slash != std::string::npos) {
      den = std::stoll(text.substr(slash + 1), &used);
      if (used != text.size() - slash - 1)
        throw ParseError("bad angle '" + text + "'");
    }
  } catch (const std::logic_error&) {
    throw ParseError("bad angle '" + text + "'");
  }
  if (den < 1) throw ParseError("angle denominator must be >= 1");
  return RationalAngle::of(num, den);
}

inline std::string format_angle(const RationalAngle& a) {
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

inline Measure parse_measure(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("type"))
      throw ParseError("measure: expected object with \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "haar") return Measure::haar();
    if (type == "roots")
      return Measure::roots_uniform(j.at("order").get<std::int64_t>());
    if (type == "atomic") {
      std::vector<Atom> atoms;
      for (const auto& item : j.at("atoms")) {
        atoms.push_back(Atom{parse_angle(item.at("angle").get<std::string>()),
                             item.at("weight").get<double>()});
      }
      return Measure::atomic(std::move(atoms));
    }
    throw ParseError("measure: unknown type '" + type + "'");
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("measure: ") + err.what());
  } catch (const DomainError& err) {
    throw ParseError(std::string("measure: ") + err.what());
  }
}

inline Measure parse_measure_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("measure: ") + err.what());
  }
  return parse_measure(j);
}

inline Measure load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_measure_text(buf.str());
}

inline nlohmann::json measure_to_json(const Measure& mu) {
  nlohmann::json j;
  switch (mu.kind) {
    case Measure::Kind::Haar:
      j["type"] = "haar";
      break;
    case Measure::Kind::RootsUniform:
      j["type"] = "roots";
      j["order"] = mu.order;
      break;
    case Measure::Kind::Atomic: {
      j["type"] = "atomic";
      j["atoms"] = nlohmann::json::array();
      for (const Atom& a : mu.atoms)
        j["atoms"].push_back(
            {{"angle", format_angle(a.angle)}, {"weight", a.weight}});
      break;
    }
  }
  return j;
}

inline nlohmann::json complex_to_json(const Complex& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace bskms
