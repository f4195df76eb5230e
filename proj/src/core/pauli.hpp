#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace otoclab {

/// Phased Pauli string on n sites: value = i^phase * tensor product of the
/// Hermitian single-site letters (identity where no letter is set). Stored as
/// two bitmasks (X-part, Z-part; a site with both bits set carries Y) plus a
/// 2-bit phase, so products and commutation checks are a handful of popcounts
/// per 64-site word. The distinguished zero string represents a vanished
/// commutator. Immutable value type.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int sites);  // identity
  static PauliString zero(int sites);
  static PauliString from_letters(int sites, const std::vector<std::pair<int, char>>& letters,
                                  int phase_exponent = 0);

  /// Parses the textual format used in configs and logs, e.g. "+i*X0 Z3 Y7".
  /// The phase prefix is one of +1, +i, -1, -i (a bare string means +1);
  /// "0" denotes the zero string. Printing round-trips exactly.
  static PauliString parse(const std::string& text, int sites);
  std::string str() const;

  int sites() const { return sites_; }
  bool is_zero() const { return zero_; }
  bool is_identity() const;
  /// Exponent k of the phase i^k, in {0,1,2,3}.
  int phase_exponent() const { return phase_; }
  std::complex<double> phase_value() const;

  char letter(int site) const;  // 'I', 'X', 'Y' or 'Z'
  std::vector<int> support() const;
  int weight() const;
  bool site_in_support(int site) const;

  bool commutes_with(const PauliString& other) const;
  bool support_overlaps(const PauliString& other) const;

  PauliString multiplied(const PauliString& rhs) const;
  /// Half commutator: [P,Q] = 2 * result when P and Q anticommute, the zero
  /// string when they commute. The result support can be strictly smaller
  /// than the union of the operand supports.
  PauliString half_commutator(const PauliString& rhs) const;

  PauliString adjoint() const;
  PauliString with_phase(int phase_exponent) const;
  PauliString phaseless() const { return with_phase(0); }

  /// Maps the string onto a larger register, sending local site j to
  /// placement[j]. Used to embed terms defined on a small support.
  PauliString embedded(int sites, const std::vector<int>& placement) const;

  bool operator==(const PauliString& other) const;
  /// Strict weak order on (masks, phase, zero flag); used for canonical maps.
  bool operator<(const PauliString& other) const;
  std::uint64_t hash() const;

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

 private:
  void set_letter(int site, char letter);

  int sites_ = 0;
  int phase_ = 0;
  bool zero_ = false;
  std::vector<std::uint64_t> x_, z_;
};

}  // namespace otoclab
