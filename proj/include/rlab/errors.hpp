#ifndef RLAB_ERRORS_HPP
#define RLAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rlab {

// Exit-code taxonomy used by the CLI:
//   usage_error        -> 2   (bad arguments, malformed config, contract violation)
//   capacity_error     -> 3   (iteration/probe/memory budget exceeded)
//   insufficient_data  -> 3   (too few usable points after censoring)
// Censored measurements are data, not errors; they never throw.

class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

class insufficient_data_error : public std::runtime_error {
public:
    insufficient_data_error(const std::string& what, std::size_t usable, std::size_t needed)
        : std::runtime_error(what), usable_(usable), needed_(needed) {}

    std::size_t usable() const { return usable_; }
    std::size_t needed() const { return needed_; }

private:
    std::size_t usable_;
    std::size_t needed_;
};

} // namespace rlab

#endif
