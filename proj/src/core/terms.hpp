#ifndef MEMSTEFAN_SRC_CORE_TERMS_HPP
#define MEMSTEFAN_SRC_CORE_TERMS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "memstefan/core/history.hpp"
#include "memstefan/core/params.hpp"
#include "memstefan/core/residuals.hpp"

namespace memstefan::core::detail {

std::vector<std::size_t> select_levels(const FrontHistory& front, const ResidualOptions& opts);

/// RL D^{1-alpha} of the u_x history of node i up to level k (u_x itself
/// when alpha = 1). Empty when the history has fewer than 2 samples.
std::optional<double> gradient_memory(const GradientField& grad, const FrontHistory& front, const MemoryParams& mem,
                                      std::size_t i, std::size_t k);

/// Caputo derivative of order beta of the u history of node i up to level k.
double temperature_caputo(const TemperatureField& u, const FrontHistory& front, double Tm, double beta, std::size_t i,
                          std::size_t k);

/// Largest mature liquid node at level k.
std::optional<std::size_t> last_mature(const FrontHistory& front, std::size_t k);

/// Linear extrapolation to s(t_k) from the values at nodes b-1 and b (or the
/// value at b alone when b = 0).
double extrapolate_to_front(const FrontHistory& front, std::size_t k, std::size_t b, double at_b_minus_1, double at_b);

/// Largest |value| divides the residual; a zero scale returns the residual.
double normalized(double residual, double scale) noexcept;

} // namespace memstefan::core::detail

#endif // MEMSTEFAN_SRC_CORE_TERMS_HPP
