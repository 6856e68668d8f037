#pragma once

#include <cstdint>

#include "gridsched/domain.hpp"

namespace gridsched::testing {

/// One slack bus named "b1", no units, no lines; demand-free.
Instance empty_instance(int periods);

// Campus diesel unit; units 1-3 share these values.
ConventionalUnit table1_unit(std::string id, std::string bus);

/// Adds a consumer with a flat demand.
void add_consumer(Instance& inst, std::string id, std::string bus, double demand);

/// Small random instance: <= 2 conventional units, <= 6 periods, <= 3 buses,
/// <= 2 single-unit contingencies, <= 1 PEV group. Always valid; PEVs never
/// have to charge, so every case is feasible.
Instance random_small(std::uint64_t seed);

/// Two units over six periods, one bus, no network; used for the
/// 4096-pattern enumeration.
Instance two_unit_six_period(std::uint64_t seed);

}  // namespace gridsched::testing
