#pragma once

#include <complex>
#include <string>
#include <vector>

#include <bskms/words.hpp>

// Shorthand used across the test files.
inline bskms::Word W(const bskms::Params& P, const std::string& text) {
  return bskms::parse_word(P, text);
}

inline bskms::Word WE(std::vector<bskms::Exp> exps, bskms::BigInt tail) {
  return bskms::Word(std::move(exps), std::move(tail));
}

inline double cabs(const std::complex<double>& z) { return std::abs(z); }
