#ifndef MEMSTEFAN_CORE_FRONT_HPP
#define MEMSTEFAN_CORE_FRONT_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace memstefan::core {

/// Free boundary s(t) sampled on t_k = t0 + k dt, with the melt time h(x_i)
/// of every space node x_i = i dx that the front has reached.
///
/// A node is liquid at level k when x_i < s(t_k). Positions must be
/// nondecreasing; solver output is strictly increasing (see
/// strictly_increasing()), while fixed-domain test fields use a constant s.
class FrontHistory {
public:
    /// node_melt_times must hold one nondecreasing entry in [t0, t_end] for
    /// every node with i dx < max position.
    FrontHistory(double t0, double dt, std::vector<double> positions, double dx,
                 std::vector<double> node_melt_times);

    /// Node melt times taken from the piecewise-linear inverse of s.
    static FrontHistory from_positions(double t0, double dt, std::vector<double> positions, double dx);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    double dx() const noexcept { return dx_; }
    std::size_t levels() const noexcept { return positions_.size(); }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    double end_time() const noexcept { return time(levels() - 1); }
    double position(std::size_t k) const noexcept { return positions_[k]; }
    std::span<const double> positions() const noexcept { return positions_; }
    double reach() const noexcept { return positions_.back(); }

    /// Number of nodes with x_i < reach().
    std::size_t nodes_reached() const noexcept { return melt_times_.size(); }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
    double node_melt_time(std::size_t i) const noexcept { return melt_times_[i]; }
    std::span<const double> node_melt_times() const noexcept { return melt_times_; }

    /// Number of liquid nodes at level k (nodes 0 .. count-1).
    std::size_t liquid_count(std::size_t k) const noexcept;
    bool liquid(std::size_t i, std::size_t k) const noexcept { return node(i) < positions_[k]; }

    /// h(x) by monotone piecewise-linear inversion of s; h(x) = t0 for
    /// x <= s(t0). Throws DomainError outside [0, reach()].
    double melt_time(double x) const;

    /// s'(t_k): second-order differences (one-sided at the ends).
    double velocity(std::size_t k) const;

    bool strictly_increasing() const noexcept;

private:
    double t0_;
    double dt_;
    double dx_;
    std::vector<double> positions_;
    std::vector<double> melt_times_;
};

/// Number of nodes i >= 0 with i dx < x.
std::size_t nodes_below(double x, double dx) noexcept;

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_FRONT_HPP
