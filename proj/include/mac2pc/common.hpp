#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mac2pc {

enum class Role : std::uint8_t { Alice = 0, Bob = 1 };

constexpr Role peer_of(Role r) { return r == Role::Alice ? Role::Bob : Role::Alice; }

constexpr std::string_view to_string(Role r) { return r == Role::Alice ? "A" : "B"; }

Role parse_role(std::string_view text);

/// Caller violated a documented precondition (sizes, ranges, odd counts).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The channel is closed, broken, or timed out.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol check failed. The session must not continue.
class ProtocolAbort : public std::runtime_error {
 public:
  ProtocolAbort(std::string phase, const std::string& what)
      : std::runtime_error("[" + phase + "] " + what), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

class OutOfMaterial : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mac2pc
