#include "twistvan/characters.h"

#include <cstdlib>
#include <sstream>

#include "twistvan/error.h"
#include "twistvan/primes.h"

namespace twistvan {

const char* ToString(FamilySign sign) { return sign == FamilySign::kPlus ? "plus" : "minus"; }

FamilySign ParseFamilySign(const std::string& text) {
  if (text == "plus" || text == "+") return FamilySign::kPlus;
  if (text == "minus" || text == "-") return FamilySign::kMinus;
  Fail(ErrorKind::kConfig, "sign must be plus or minus, got '" + text + "'");
}

bool IsFundamental(int64_t d) {
  if (d == 0 || d == 1) return false;
  int64_t r = ((d % 4) + 4) % 4;
  if (r == 1) return IsSquarefree(static_cast<uint64_t>(std::llabs(d)));
  if (r != 0) return false;
  int64_t m = d / 4;
  int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && IsSquarefree(static_cast<uint64_t>(std::llabs(m)));
}

int Kronecker(int64_t d, uint64_t n) {
  static constexpr int kTab[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  int64_t a = d;
  uint64_t b = n;
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (b & 1) == 0) return 0;
  int v = 0;
  while ((b & 1) == 0) {
    b >>= 1;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : kTab[a & 7];
  // b is odd and positive from here; a may be negative.
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      a /= 2;
      ++v;
    }
    if (v & 1) k *= kTab[b & 7];
    if (a < 0) {
      // (-1/b) = (-1)^((b-1)/2)
      if ((b & 3) == 3) k = -k;
      a = -a;
    }
    // Reciprocity for odd positive a, b.
    if ((static_cast<uint64_t>(a) & b & 2) != 0) k = -k;
    uint64_t r = static_cast<uint64_t>(a);
    a = static_cast<int64_t>(b % r);
    b = r;
  }
}

int ChiSigned(int64_t d, int64_t m) {
  if (m >= 0) return Kronecker(d, static_cast<uint64_t>(m));
  int s = d < 0 ? -1 : 1;
  return s * Kronecker(d, static_cast<uint64_t>(-m));
}

void ValidateSelector(const FamilySelector& sel) {
  if (sel.curve == nullptr) Fail(ErrorKind::kConfig, "family selector has no curve");
  if (sel.bound < 1) Fail(ErrorKind::kConfig, "X must be at least 1");
  const CurveSpec& c = *sel.curve;
  if (sel.sign == FamilySign::kPlus && !IsPrime(static_cast<uint64_t>(c.conductor)))
    Fail(ErrorKind::kConfig, "S+ is only defined for prime conductor; " + c.label +
                                 " has Q = " + std::to_string(c.conductor));
  if (sel.progression) {
    const Progression& pr = *sel.progression;
    if (!IsPrime(pr.q)) Fail(ErrorKind::kConfig, "q = " + std::to_string(pr.q) + " is not prime");
    if (c.conductor % static_cast<int64_t>(pr.q) == 0)
      Fail(ErrorKind::kConfig, "q = " + std::to_string(pr.q) + " divides the conductor");
    if (pr.lambda != 1 && pr.lambda != -1) Fail(ErrorKind::kConfig, "lambda must be +1 or -1");
  }
}

namespace {

// Calls visit(d) for every d in S(X) (ignoring any progression), ascending |d|.
template <typename Visit>
void ForEachInFamily(const FamilySelector& sel, Visit&& visit) {
  ValidateSelector(sel);
  const CurveSpec& c = *sel.curve;
  const uint64_t X = static_cast<uint64_t>(sel.bound);
  const int s = sel.sign == FamilySign::kPlus ? 1 : -1;

  std::vector<std::pair<int64_t, int>> local;  // (p, required chi_d(p))
  if (sel.sign == FamilySign::kMinus) {
    for (int64_t p : c.bad_primes()) local.emplace_back(p, -static_cast<int>(Ap(c, p)));
  } else {
    local.emplace_back(c.conductor, static_cast<int>(Ap(c, c.conductor)));
  }

  uint32_t root = 1;
  while (static_cast<uint64_t>(root) * root <= X) ++root;
  auto primes = PrimesUpTo(root);
  std::vector<uint8_t> sqfree;
  SieveSquarefree(1, X + 1, primes, sqfree);  // sqfree[a-1] for a in 1..X

  for (uint64_t a = 1; a <= X; ++a) {
    int64_t d = s * static_cast<int64_t>(a);
    if (d == 1) continue;
    int64_t r = ((d % 4) + 4) % 4;
    bool fundamental = false;
    if (r == 1) {
      fundamental = sqfree[a - 1] != 0;
    } else if (r == 0) {
      int64_t m = d / 4;
      int64_t rm = ((m % 4) + 4) % 4;
      fundamental = (rm == 2 || rm == 3) && sqfree[a / 4 - 1] != 0;
    }
    if (!fundamental) continue;
    bool ok = true;
    for (const auto& [p, want] : local) {
      if (Kronecker(d, static_cast<uint64_t>(p)) != want) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (ChiSigned(d, -c.conductor) * c.root_number != 1)
      Fail(ErrorKind::kConfig, "d = " + std::to_string(d) + " in " + ToString(sel.sign) +
                                   " family of " + c.label +
                                   " has odd twisted sign; check root_number");
    visit(d);
  }
}

}  // namespace

std::vector<int64_t> EnumerateFamily(const FamilySelector& sel) {
  std::vector<int64_t> out;
  ForEachInFamily(sel, [&](int64_t d) {
    if (!sel.progression ||
        Kronecker(d, sel.progression->q) == sel.progression->lambda)
      out.push_back(d);
  });
  return out;
}

FamilyCensus CensusFamily(const FamilySelector& sel) {
  FamilyCensus census;
  ForEachInFamily(sel, [&](int64_t d) {
    ++census.total;
    if (!sel.progression) return;
    int chi = Kronecker(d, sel.progression->q);
    if (chi > 0)
      ++census.plus;
    else if (chi < 0)
      ++census.minus;
    else
      ++census.zero;
  });
  return census;
}

std::string FamilyCsv(const std::vector<int64_t>& family, std::optional<uint64_t> q) {
  std::ostringstream out;
  out << (q ? "d,chi_q\n" : "d\n");
  for (int64_t d : family) {
    out << d;
    if (q) out << ',' << Kronecker(d, *q);
    out << '\n';
  }
  return out.str();
}

}  // namespace twistvan
