#ifndef TWISTVAN_CHARACTERS_H_
#define TWISTVAN_CHARACTERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistvan/curve.h"

namespace twistvan {

enum class FamilySign { kMinus, kPlus };

const char* ToString(FamilySign sign);
FamilySign ParseFamilySign(const std::string& text);

// d = 1 mod 4 squarefree, or d = 4m with m = 2, 3 mod 4 squarefree.
bool IsFundamental(int64_t d);

// Kronecker symbol (d/n) for n >= 0.
int Kronecker(int64_t d, uint64_t n);

// chi_d(m) for any integer m, with chi_d(-1) = sign(d).
int ChiSigned(int64_t d, int64_t m);

struct Progression {
  uint64_t q = 0;
  int lambda = 1;
};

struct FamilySelector {
  FamilySign sign = FamilySign::kMinus;
  int64_t bound = 0;  // X
  const CurveSpec* curve = nullptr;
  std::optional<Progression> progression;
};

// Checks the selector invariants (S+ needs prime conductor; q prime, q !| Q,
// lambda = +-1). Throws kConfig.
void ValidateSelector(const FamilySelector& sel);

// Fundamental discriminants in S-(X) (-X <= d < 0, chi_d(p) = -a_p for all
// p | Q) or S+(X) (1 < d <= X, chi_d(Q) = a_Q), optionally restricted to
// chi_d(q) = lambda, in ascending |d|. Every emitted d must have even twisted
// sign chi_d(-Q) w_E = +1, otherwise kConfig naming d.
std::vector<int64_t> EnumerateFamily(const FamilySelector& sel);

struct FamilyCensus {
  uint64_t total = 0;
  uint64_t plus = 0;   // chi_d(q) = +1
  uint64_t minus = 0;  // chi_d(q) = -1
  uint64_t zero = 0;   // chi_d(q) = 0
};

// Sizes of S(X) and of its chi_d(q) classes; q is taken from the selector's
// progression (class counts stay zero without one).
FamilyCensus CensusFamily(const FamilySelector& sel);

// CSV with header "d" or "d,chi_q".
std::string FamilyCsv(const std::vector<int64_t>& family, std::optional<uint64_t> q);

}  // namespace twistvan

#endif  // TWISTVAN_CHARACTERS_H_
