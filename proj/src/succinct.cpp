#include "hcs/succinct.hpp"

#include <iomanip>
#include <sstream>

#include "detail/util.hpp"

namespace hcs {

FiniteAutomaton cycle_dfa(std::size_t length) {
  if (length == 0) throw ContractError("cycle length must be at least 1");
  AutomatonBuilder b(Alphabet({"a"}));
  for (std::size_t i = 0; i < length; ++i) b.add_state("c" + std::to_string(i), i == 0);
  for (std::size_t i = 0; i < length; ++i) {
    b.add_transition(static_cast<StateId>(i), SymbolId{0}, static_cast<StateId>((i + 1) % length));
  }
  return b.build();
}

std::vector<std::uint64_t> first_primes(std::size_t k) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t n = 2; primes.size() < k; ++n) {
    bool prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(n);
  }
  return primes;
}

Hcs prime_family(std::size_t k) {
  if (k == 0) throw ContractError("prime_family needs k >= 1");
  std::vector<GuardAutomaton> guards;
  for (std::uint64_t p : first_primes(k)) guards.emplace_back(cycle_dfa(p));
  return build_intersection_dfa(Alphabet({"a"}), std::move(guards));
}

bool SuccinctnessReport::chain_holds() const {
  if (minimal_dfa_states < product_of_primes) return false;
  return k >= 2 ? product_of_primes > bound_2k : product_of_primes >= bound_2k;
}

SuccinctnessReport verify_succinctness(std::size_t k, std::size_t max_k) {
  if (k == 0) throw ContractError("verify_succinctness needs k >= 1");
  if (k > max_k) throw ResourceError("succinctness experiment beyond the k cap", max_k);
  SuccinctnessReport report;
  report.k = k;
  report.primes = first_primes(k);
  const Hcs family = prime_family(k);
  report.hcs_size = family.size();
  const FiniteAutomaton dfa = determinize_hcs(family);
  report.determinized_states = dfa.num_states();
  report.minimal_dfa_states = minimize(dfa).num_states();
  for (std::uint64_t p : report.primes) report.product_of_primes *= p;
  report.bound_2k = detail::saturating_pow(2, k);
  return report;
}

std::string format_report_table(const std::vector<SuccinctnessReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(4) << "k" << std::setw(18) << "primes" << std::right << std::setw(10) << "hcs_size"
      << std::setw(14) << "determinized" << std::setw(12) << "min_dfa" << std::setw(10) << "product"
      << std::setw(8) << "2^k" << "  chain\n";
  for (const auto& r : reports) {
    std::string primes;
    for (std::size_t i = 0; i < r.primes.size(); ++i) primes += (i ? "," : "") + std::to_string(r.primes[i]);
    out << std::left << std::setw(4) << r.k << std::setw(18) << primes << std::right << std::setw(10) << r.hcs_size
        << std::setw(14) << r.determinized_states << std::setw(12) << r.minimal_dfa_states << std::setw(10)
        << r.product_of_primes << std::setw(8) << r.bound_2k << "  " << (r.chain_holds() ? "ok" : "VIOLATED")
        << '\n';
  }
  return out.str();
}

}  // namespace hcs
