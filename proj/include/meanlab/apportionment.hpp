#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "meanlab/means.hpp"

namespace meanlab {

struct StateRecord {
  std::string name;
  std::uint64_t population = 0;
};

enum class AllocationMode { one_shot, iterative };

inline const char* allocation_mode_name(AllocationMode m) {
  return m == AllocationMode::one_shot ? "one_shot" : "iterative";
}

/// Apportionment methods are two-argument means: quasi-arithmetic with a
/// generator f, Bajraktarevic with (f, p), or the exponential Cauchy
/// quotient mean (the harmonic method at two arguments).
inline void validate_apportionment_method(const MeanKind& method) {
  const bool ok = std::holds_alternative<QuasiArithmeticKind>(method) ||
                  std::holds_alternative<BajraktarevicKind>(method) ||
                  std::holds_alternative<ExpCauchyKind>(method);
  if (!ok) {
    throw std::invalid_argument(
        "apportionment method must be quasi_arithmetic, bajraktarevic or "
        "exp_cauchy");
  }
}

struct ApportionmentConfig {
  std::size_t house_size = 435;
  MeanKind method = QuasiArithmeticKind{generators::log()};
  AllocationMode mode = AllocationMode::one_shot;
};

struct SeatAward {
  std::size_t order = 0;  // 1-based award order
  std::string state;
  double priority = 0.0;
  std::size_t seats_after = 0;
};

struct SeatAllocation {
  std::vector<std::size_t> seats;  // parallel to the input states
  std::vector<SeatAward> audit;
  std::string mode_label;
};

struct InitialAllocation {
  std::vector<std::size_t> seats;
  std::size_t remaining = 0;
};

/// Proportional share rounded down, with a floor of one seat per state.
/// The floor can oversubscribe the house; that case is surfaced as an
/// error rather than silently repaired.
inline InitialAllocation initial_allocation(std::span<const StateRecord> states,
                                            std::size_t house_size) {
  if (states.empty()) throw std::invalid_argument("no states");
  if (house_size < states.size()) {
    throw std::invalid_argument("house size below the number of states");
  }
  std::uint64_t total = 0;
  for (const auto& s : states) {
    if (s.population < 1) throw std::invalid_argument("population must be >= 1");
    total += s.population;
  }
  InitialAllocation out;
  out.seats.reserve(states.size());
  std::size_t assigned = 0;
  for (const auto& s : states) {
    const std::uint64_t floor_share =
        static_cast<std::uint64_t>(house_size) * s.population / total;
    const std::size_t r = std::max<std::uint64_t>(1, floor_share);
    out.seats.push_back(r);
    assigned += r;
  }
  if (assigned > house_size) {
    throw std::domain_error(
        "initial allocation oversubscribed: one-seat floors exceed the house "
        "size");
  }
  out.remaining = house_size - assigned;
  return out;
}

/// Two-argument mean of (r/N, (r+1)/N) under the configured method.
/// A lower value means a stronger claim to the next seat.
inline double priority_value(const MeanKind& method, std::size_t r,
                             std::uint64_t population) {
  validate_apportionment_method(method);
  if (r < 1 || population < 1) {
    throw std::invalid_argument("priority_value: r >= 1 and N >= 1 required");
  }
  const double n = static_cast<double>(population);
  const double lo = static_cast<double>(r) / n;
  const double hi = static_cast<double>(r + 1) / n;
  return evaluate_mean(method, Sample({lo, hi}, DomainTag::positive));
}

namespace detail {

struct PriorityEntry {
  double priority;
  std::uint64_t population;
  std::size_t index;
};

// Ascending priority; ties go to the larger population, then to the
// lexicographically smaller name.
inline bool priority_before(const PriorityEntry& a, const PriorityEntry& b,
                            std::span<const StateRecord> states) {
  if (a.priority != b.priority) return a.priority < b.priority;
  if (a.population != b.population) return a.population > b.population;
  return states[a.index].name < states[b.index].name;
}

}  // namespace detail

/// Distributes k remaining seats. one_shot ranks every state once and
/// awards a seat to each of the k lowest priorities, so no state can gain
/// more than one extra seat; iterative re-ranks after every award.
inline SeatAllocation assign_remaining(std::span<const StateRecord> states,
                                       std::vector<std::size_t> seats,
                                       std::size_t k,
                                       const ApportionmentConfig& config) {
  validate_apportionment_method(config.method);
  SeatAllocation out;
  out.mode_label = allocation_mode_name(config.mode);
  if (config.mode == AllocationMode::one_shot) {
    if (k > states.size()) {
      throw std::invalid_argument(
          "one_shot mode cannot assign more remaining seats than states; use "
          "iterative mode");
    }
    std::vector<detail::PriorityEntry> entries;
    entries.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      entries.push_back({priority_value(config.method, seats[i],
                                        states[i].population),
                         states[i].population, i});
    }
    std::sort(entries.begin(), entries.end(),
              [&states](const auto& a, const auto& b) {
                return detail::priority_before(a, b, states);
              });
    for (std::size_t j = 0; j < k; ++j) {
      const auto& e = entries[j];
      seats[e.index] += 1;
      out.audit.push_back(
          {j + 1, states[e.index].name, e.priority, seats[e.index]});
    }
  } else {
    std::vector<detail::PriorityEntry> entries;
    entries.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      entries.push_back({priority_value(config.method, seats[i],
                                        states[i].population),
                         states[i].population, i});
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t winner = 0;
      for (std::size_t i = 1; i < entries.size(); ++i) {
        if (detail::priority_before(entries[i], entries[winner], states)) {
          winner = i;
        }
      }
      auto& e = entries[winner];
      seats[e.index] += 1;
      out.audit.push_back({j + 1, states[e.index].name, e.priority,
                           seats[e.index]});
      e.priority =
          priority_value(config.method, seats[e.index], e.population);
    }
  }
  out.seats = std::move(seats);
  return out;
}

/// Full apportionment: proportional floors plus remaining-seat awards.
inline SeatAllocation apportion(std::span<const StateRecord> states,
                                const ApportionmentConfig& config) {
  const InitialAllocation initial = initial_allocation(states, config.house_size);
  return assign_remaining(states, initial.seats, initial.remaining, config);
}

/// True when granting the next seat to A rather than B is fair under the
/// method: M2(rA/NA, (rA+1)/NA) < M2(rB/NB, (rB+1)/NB).
inline bool fairness_check(std::size_t r_a, std::uint64_t n_a, std::size_t r_b,
                           std::uint64_t n_b, const MeanKind& method) {
  return priority_value(method, r_a, n_a) < priority_value(method, r_b, n_b);
}

/// The expanded four-term form of the Bajraktarevic fairness inequality:
///   sum_{i,j} p(a_i) p(b_j) (f(b_j) - f(a_i)) > 0
/// over the two ratio pairs, with the sign flipped for decreasing f.
/// Algebraically equivalent to the direct mean comparison.
inline bool bajraktarevic_fairness_expanded(std::size_t r_a, std::uint64_t n_a,
                                            std::size_t r_b, std::uint64_t n_b,
                                            const Generator& f,
                                            const WeightFunction& p) {
  const double a1 = static_cast<double>(r_a) / static_cast<double>(n_a);
  const double a2 = static_cast<double>(r_a + 1) / static_cast<double>(n_a);
  const double b1 = static_cast<double>(r_b) / static_cast<double>(n_b);
  const double b2 = static_cast<double>(r_b + 1) / static_cast<double>(n_b);
  double sum = 0.0;
  for (double a : {a1, a2}) {
    for (double b : {b1, b2}) {
      sum += p.eval(a) * p.eval(b) * (f.eval(b) - f.eval(a));
    }
  }
  return f.direction == Monotonicity::increasing ? sum > 0.0 : sum < 0.0;
}

// ---------------------------------------------------------------------------
// Census I/O

/// CSV with header `name,population`; populations must be plain
/// non-negative integers (no sign, decimal point or exponent).
inline std::vector<StateRecord> read_census_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "name,population") {
    throw std::invalid_argument("census CSV must start with 'name,population'");
  }
  std::vector<StateRecord> states;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("census CSV row missing comma: " + line);
    }
    StateRecord rec;
    rec.name = line.substr(0, comma);
    const std::string pop = line.substr(comma + 1);
    if (rec.name.empty() || pop.empty()) {
      throw std::invalid_argument("census CSV row has empty field: " + line);
    }
    for (char c : pop) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument(
            "population must be a non-negative integer: " + pop);
      }
    }
    rec.population = std::stoull(pop);
    if (rec.population < 1) {
      throw std::invalid_argument("population must be >= 1: " + line);
    }
    if (!seen.insert(rec.name).second) {
      throw std::invalid_argument("duplicate state name: " + rec.name);
    }
    states.push_back(std::move(rec));
  }
  if (states.empty()) throw std::invalid_argument("census CSV has no rows");
  return states;
}

inline void write_allocation_csv(std::ostream& os,
                                 std::span<const StateRecord> states,
                                 std::span<const std::size_t> seats) {
  os << "name,population,seats\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    os << states[i].name << ',' << states[i].population << ',' << seats[i]
       << '\n';
  }
}

inline nlohmann::json allocation_audit_json(
    std::span<const StateRecord> states, const SeatAllocation& alloc,
    const ApportionmentConfig& config) {
  nlohmann::json j;
  j["house_size"] = config.house_size;
  j["method"] = mean_kind_name(config.method);
  j["mode"] = alloc.mode_label;
  j["seats"] = nlohmann::json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    j["seats"].push_back({{"name", states[i].name},
                          {"population", states[i].population},
                          {"seats", alloc.seats[i]}});
  }
  j["awards"] = nlohmann::json::array();
  char buffer[64];
  for (const auto& award : alloc.audit) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", award.priority);
    j["awards"].push_back({{"order", award.order},
                           {"state", award.state},
                           {"priority", std::string(buffer)},
                           {"seats_after", award.seats_after}});
  }
  return j;
}

}  // namespace meanlab
