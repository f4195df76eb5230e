#include "core/pauli.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace otoclab {

namespace {
constexpr std::complex<double> kPhaseValues[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
const char* kPhaseNames[4] = {"+1", "+i", "-1", "-i"};

int words_for(int sites) { return (sites + 63) / 64; }
}  // namespace

PauliString::PauliString(int sites) : sites_(sites) {
  if (sites < 0) throw std::invalid_argument("negative site count");
  x_.assign(words_for(sites), 0);
  z_.assign(words_for(sites), 0);
}

PauliString PauliString::zero(int sites) {
  PauliString p(sites);
  p.zero_ = true;
  return p;
}

PauliString PauliString::from_letters(int sites, const std::vector<std::pair<int, char>>& letters,
                                      int phase_exponent) {
  PauliString p(sites);
  p.phase_ = ((phase_exponent % 4) + 4) % 4;
  for (auto [site, letter] : letters) p.set_letter(site, letter);
  return p;
}

void PauliString::set_letter(int site, char letter) {
  if (site < 0 || site >= sites_) throw std::out_of_range("pauli letter site out of range");
  std::uint64_t bit = 1ull << (site % 64);
  int w = site / 64;
  x_[w] &= ~bit;
  z_[w] &= ~bit;
  switch (letter) {
    case 'I': break;
    case 'X': x_[w] |= bit; break;
    case 'Y': x_[w] |= bit; z_[w] |= bit; break;
    case 'Z': z_[w] |= bit; break;
    default: throw std::invalid_argument("unknown pauli letter");
  }
}

char PauliString::letter(int site) const {
  if (site < 0 || site >= sites_) throw std::out_of_range("site out of range");
  std::uint64_t bit = 1ull << (site % 64);
  int w = site / 64;
  bool xb = x_[w] & bit, zb = z_[w] & bit;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

bool PauliString::is_identity() const {
  if (zero_) return false;
  for (std::size_t w = 0; w < x_.size(); ++w)
    if (x_[w] | z_[w]) return false;
  return true;
}

std::complex<double> PauliString::phase_value() const {
  if (zero_) return {0, 0};
  return kPhaseValues[phase_];
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  if (zero_) return out;
  for (int s = 0; s < sites_; ++s) {
    std::uint64_t bit = 1ull << (s % 64);
    if ((x_[s / 64] | z_[s / 64]) & bit) out.push_back(s);
  }
  return out;
}

int PauliString::weight() const {
  if (zero_) return 0;
  int w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

bool PauliString::site_in_support(int site) const {
  if (zero_ || site < 0 || site >= sites_) return false;
  std::uint64_t bit = 1ull << (site % 64);
  return (x_[site / 64] | z_[site / 64]) & bit;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (zero_ || other.zero_) return true;
  if (sites_ != other.sites_) throw std::invalid_argument("pauli site-count mismatch");
  int parity = 0;
  for (std::size_t w = 0; w < x_.size(); ++w)
    parity ^= (std::popcount(x_[w] & other.z_[w]) ^ std::popcount(z_[w] & other.x_[w])) & 1;
  return parity == 0;
}

bool PauliString::support_overlaps(const PauliString& other) const {
  if (zero_ || other.zero_) return false;
  if (sites_ != other.sites_) throw std::invalid_argument("pauli site-count mismatch");
  for (std::size_t w = 0; w < x_.size(); ++w)
    if ((x_[w] | z_[w]) & (other.x_[w] | other.z_[w])) return true;
  return false;
}

PauliString PauliString::multiplied(const PauliString& rhs) const {
  if (sites_ != rhs.sites_) throw std::invalid_argument("pauli site-count mismatch");
  if (zero_ || rhs.zero_) return zero(sites_);
  PauliString out(sites_);
  // Per-site phase of L1*L2 in the Hermitian-letter convention accumulates as
  // i^(a1 b1 + a2 b2 + 2 a2 b1 - (a1^a2)(b1^b2)), summed with popcounts.
  long e = phase_ + rhs.phase_;
  for (std::size_t w = 0; w < x_.size(); ++w) {
    std::uint64_t x1 = x_[w], z1 = z_[w], x2 = rhs.x_[w], z2 = rhs.z_[w];
    e += std::popcount(x1 & z1);
    e += std::popcount(x2 & z2);
    e += 2 * std::popcount(x2 & z1);
    e -= std::popcount((x1 ^ x2) & (z1 ^ z2));
    out.x_[w] = x1 ^ x2;
    out.z_[w] = z1 ^ z2;
  }
  out.phase_ = static_cast<int>(((e % 4) + 4) % 4);
  return out;
}

PauliString PauliString::half_commutator(const PauliString& rhs) const {
  if (commutes_with(rhs)) return zero(std::max(sites_, rhs.sites_));
  return multiplied(rhs);  // anticommuting: [P,Q] = 2 PQ
}

PauliString PauliString::adjoint() const {
  PauliString out = *this;
  if (out.phase_ == 1 || out.phase_ == 3) out.phase_ ^= 2;
  return out;
}

PauliString PauliString::with_phase(int phase_exponent) const {
  PauliString out = *this;
  out.phase_ = ((phase_exponent % 4) + 4) % 4;
  return out;
}

PauliString PauliString::embedded(int sites, const std::vector<int>& placement) const {
  if (static_cast<int>(placement.size()) != sites_)
    throw std::invalid_argument("placement arity mismatch");
  PauliString out(sites);
  out.phase_ = phase_;
  out.zero_ = zero_;
  for (int s = 0; s < sites_; ++s) {
    char l = letter(s);
    if (l != 'I') out.set_letter(placement[s], l);
  }
  return out;
}

bool PauliString::operator==(const PauliString& other) const {
  return sites_ == other.sites_ && zero_ == other.zero_ &&
         (zero_ || (phase_ == other.phase_ && x_ == other.x_ && z_ == other.z_));
}

bool PauliString::operator<(const PauliString& other) const {
  if (sites_ != other.sites_) return sites_ < other.sites_;
  if (zero_ != other.zero_) return zero_ < other.zero_;
  if (x_ != other.x_) return x_ < other.x_;
  if (z_ != other.z_) return z_ < other.z_;
  return phase_ < other.phase_;
}

std::uint64_t PauliString::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(sites_));
  mix(zero_ ? 7u : static_cast<std::uint64_t>(phase_));
  for (auto w : x_) mix(w);
  for (auto w : z_) mix(w);
  return h;
}

std::string PauliString::str() const {
  if (zero_) return "0";
  std::ostringstream os;
  os << kPhaseNames[phase_];
  bool first = true;
  for (int s = 0; s < sites_; ++s) {
    char l = letter(s);
    if (l == 'I') continue;
    os << (first ? "*" : " ") << l << s;
    first = false;
  }
  return os.str();
}

PauliString PauliString::parse(const std::string& text, int sites) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) || c == ' ') t.push_back(c);
  if (t == "0") return zero(sites);
  int phase = 0;
  std::string body = t;
  auto star = t.find('*');
  std::string head = (star == std::string::npos) ? t : t.substr(0, star);
  bool head_is_phase = false;
  for (int k = 0; k < 4; ++k) {
    if (head == kPhaseNames[k] || (k == 0 && head == "1") || (k == 1 && head == "i") ||
        (k == 3 && head == "-i")) {
      phase = k;
      head_is_phase = true;
      break;
    }
  }
  if (head_is_phase) {
    body = (star == std::string::npos) ? "" : t.substr(star + 1);
  } else if (star != std::string::npos) {
    throw std::invalid_argument("unknown phase prefix in pauli string: " + head);
  }
  std::vector<std::pair<int, char>> letters;
  std::istringstream is(body);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2) throw std::invalid_argument("bad pauli token: " + tok);
    char l = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    int site = std::stoi(tok.substr(1));
    letters.emplace_back(site, l);
  }
  return from_letters(sites, letters, phase);
}

}  // namespace otoclab
