#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcs/automaton.hpp"
#include "hcs/hcs.hpp"

namespace hcs {

// ℓ-state cycle over {a} accepting {a^{ℓn}}.
FiniteAutomaton cycle_dfa(std::size_t length);

std::vector<std::uint64_t> first_primes(std::size_t k);

// Deterministic intersection gadget over the cycle DFAs of the first k primes:
// L = {a^{p_1...p_k n} $^k}.
Hcs prime_family(std::size_t k);

// State counts are measured on the minimal DFA (NFA minimization is not attempted).
struct SuccinctnessReport {
  std::size_t k = 0;
  std::vector<std::uint64_t> primes;
  std::uint64_t hcs_size = 0;
  std::size_t determinized_states = 0;
  std::size_t minimal_dfa_states = 0;
  std::uint64_t product_of_primes = 1;
  std::uint64_t bound_2k = 1;

  // minimal_dfa_states ≥ product ≥ 2^k, strict at k ≥ 2.
  bool chain_holds() const;
};

inline constexpr std::size_t kDefaultSuccinctnessCap = 6;

// Throws ContractError when k is 0 and ResourceError when k exceeds max_k.
SuccinctnessReport verify_succinctness(std::size_t k, std::size_t max_k = kDefaultSuccinctnessCap);

std::string format_report_table(const std::vector<SuccinctnessReport>& reports);

}  // namespace hcs
