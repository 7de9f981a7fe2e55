#pragma once

#include <exception>

#include "socon/protocols.hpp"

namespace socon::detail {

/// Runs fn(i) for every agent of one phase. Agents write disjoint state, so
/// the OpenMP path is bitwise identical to the serial reference loop.
template <class Fn>
void for_each_agent(Execution exec, int count, Fn&& fn) {
  if (exec == Execution::serial) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(socon_agent_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline void require_finite(const Matrix& m, const char* what, int agent) {
  if (!m.allFinite()) {
    throw DivergenceError(std::string(what) + " of agent " + std::to_string(agent) +
                          " is not finite; step size too large?");
  }
}

}  // namespace socon::detail
