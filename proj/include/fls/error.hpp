#pragma once

#include <stdexcept>
#include <string>

namespace fls {

// Error categories map onto CLI exit codes: bad_input -> 2,
// precondition -> 3, incomplete -> 4.
enum class errc { bad_input, precondition, incomplete };

class Error : public std::runtime_error {
public:
  Error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  errc kind() const { return kind_; }

private:
  errc kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) { throw Error(errc::bad_input, msg); }
[[noreturn]] inline void fail_pre(const std::string& msg) { throw Error(errc::precondition, msg); }
[[noreturn]] inline void fail_incomplete(const std::string& msg) { throw Error(errc::incomplete, msg); }

}  // namespace fls
