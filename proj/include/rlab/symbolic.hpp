#ifndef RLAB_SYMBOLIC_HPP
#define RLAB_SYMBOLIC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rlab/measure.hpp"
#include "rlab/stats.hpp"
#include "rlab/systems.hpp"

namespace rlab {

// Symbolic coding: partitions of T^k, itineraries under a system, and
// repetition times R_n(x) = min{ k >= 1 : the first n symbols recur at
// offset k }, whose growth rate estimates the partition entropy.

using Symbol = std::uint32_t;
constexpr Symbol kNoCell = 0xFFFFFFFFu; // point outside every cell (data, not an error)

// Dyadic grid: cell id = concatenated top-g bits of each coordinate. Exact.
struct GridPartition {
    std::uint32_t g = 1; // cells have side 1/2^g
    std::uint32_t k = 1;
};

// Separated-ball construction: balls around a maximal s-separated center
// set, radii in (s, 2s) chosen so annuli around each sphere are thin; cell
// i is B_i minus the earlier cells (first-containing-ball rule).
struct BallPartition {
    std::vector<TorusPoint> centers;
    std::vector<double> rho;
    std::vector<u64> rho_thresholds;
    double s = 0.0;
};

class Partition {
public:
    static Partition grid(std::uint32_t g, std::uint32_t k);
    static Partition balls(BallPartition b);

    Symbol cell_of(const TorusPoint& x) const;
    std::size_t cell_count() const;
    std::uint32_t dim() const;
    const BallPartition* ball_form() const { return std::get_if<BallPartition>(&impl_); }

private:
    std::variant<GridPartition, BallPartition> impl_;
};

// Greedy pass in seed-shuffled order; result is s-separated and every input
// sample lies within s of some center.
std::vector<TorusPoint> maximal_separated_set(std::span<const TorusPoint> samples, double s,
                                              u64 shuffle_seed);

// Quadrisection pick of rho in (s, 2s): repeatedly split the current
// interval in 4 and descend into the central quarter of smaller measure
// (ties to the left), which halves the interval measure each level. The
// returned rho has thin annuli: mu{ rho - 4^-n s < d(x,.) < rho + 4^-n s }
// <= 2^-(n-1) mu(B(x, 2s)).
struct ThinRadius {
    double rho = 0.0;
    std::vector<double> interval_measure; // m(I_0), m(I_1), ..., m(I_depth)
    bool halving_ok = false;              // m(I_{n+1}) <= m(I_n)/2 at every level
    bool annulus_ok = false;              // claim bound at every n <= depth-1
};

ThinRadius select_thin_radius(const TorusPoint& x, double s, const MeasureModel& measure,
                              int depth);

struct PartitionDiagnostics {
    std::size_t cell_count = 0;
    double coverage = 1.0;            // fraction of construction samples in some cell
    double bottom_frequency = 0.0;    // fraction of fresh samples mapping to no cell
    ScalingFit boundary_fit;          // log mu(eps-nbhd of boundary) vs log eps
};

Partition build_partition(std::span<const TorusPoint> samples, double s,
                          const MeasureModel& measure, u64 seed, int depth = 8,
                          PartitionDiagnostics* diagnostics = nullptr);

// Symbols of x, f x, ..., f^{n-1} x.
std::vector<Symbol> itinerary(const SystemSpec& sys, const TorusPoint& x, std::size_t n,
                              const Partition& partition);

struct Repetition {
    u64 value = 0;
    bool censored = false;
};

// Least k >= 1 with symbols[k..k+n-1] == symbols[0..n-1], searched by a
// rolling hash with exact confirmation; undefined-cell error if the base
// word contains the no-cell symbol.
Repetition repetition_from_symbols(std::span<const Symbol> symbols, std::size_t n);

Repetition repetition_time(const SystemSpec& sys, const TorusPoint& x, std::size_t n,
                           const Partition& partition, u64 k_max);

struct EntropyEstimate {
    std::vector<int> ns;
    std::vector<double> median_rate;       // median over points of (1/n) log R_n
    std::vector<double> mean_rate;         // mean, emitted alongside for comparison
    std::vector<double> median_log_r;      // median log R_n feeding the slope
    std::vector<std::size_t> censored;     // per n
    ScalingFit slope;                      // median log R_n against n
    double analytic_entropy = 0.0;
    std::vector<std::vector<Repetition>> per_point; // [point][n index]
};

EntropyEstimate entropy_estimate(const SystemSpec& sys, const Partition& partition,
                                 int n_lo, int n_hi, std::span<const TorusPoint> points,
                                 u64 k_max, unsigned threads = 1);

// chi-hat: slope of log(1/rho_n) against n, where rho_n is the largest
// tested radius whose ball's probes all share x's n-itinerary. Probing is
// one-sided, so rho_n can overestimate the true inner radius.
struct InteriorExponent {
    std::vector<int> ns;
    std::vector<double> rho;
    ScalingFit fit;
};

InteriorExponent large_interior_exponent(const SystemSpec& sys, const Partition& partition,
                                         const TorusPoint& x, int n_lo, int n_hi,
                                         int probes, u64 seed);

} // namespace rlab

#endif
