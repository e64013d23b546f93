#pragma once

#include <cstdint>

namespace esif {

/// Accumulates floating-point operation counts by kind.
///
/// Every numerical kernel in the library reports its work through the
/// thread-local counter returned by flop_counter().  Counting is
/// deterministic: a given sequence of calls produces the same totals on
/// every run, independent of timing.
///
/// Convention: a dense m-by-n matrix-vector product costs m*n
/// multiplications and m*(n-1) additions (2*n^2 - n total for square n).
/// Accumulating products (C += A*B) count m*n*k multiplications and
/// m*n*k additions.
struct FlopCounter {
    std::uint64_t adds = 0;
    std::uint64_t mults = 0;
    std::uint64_t divs = 0;
    std::uint64_t sqrts = 0;

    std::uint64_t total() const { return adds + mults + divs + sqrts; }

    FlopCounter& operator+=(const FlopCounter& o) {
        adds += o.adds;
        mults += o.mults;
        divs += o.divs;
        sqrts += o.sqrts;
        return *this;
    }

    FlopCounter operator-(const FlopCounter& o) const {
        return FlopCounter{adds - o.adds, mults - o.mults, divs - o.divs,
                           sqrts - o.sqrts};
    }
};

/// Thread-local running counter, shared by all kernels on this thread.
inline FlopCounter& flop_counter() {
    thread_local FlopCounter counter;
    return counter;
}

/// RAII window over the thread-local counter: records the counter at
/// construction and reports the delta accumulated since then.
class FlopTally {
  public:
    FlopTally() : start_(flop_counter()) {}

    /// Operations accumulated since construction.
    FlopCounter delta() const { return flop_counter() - start_; }

  private:
    FlopCounter start_;
};

namespace detail {

inline void count_add(std::uint64_t n = 1) { flop_counter().adds += n; }
inline void count_mult(std::uint64_t n = 1) { flop_counter().mults += n; }
inline void count_div(std::uint64_t n = 1) { flop_counter().divs += n; }
inline void count_sqrt(std::uint64_t n = 1) { flop_counter().sqrts += n; }

} // namespace detail

} // namespace esif
