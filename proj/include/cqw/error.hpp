#pragma once

#include <stdexcept>
#include <string>

namespace cqw {

// Base for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised where a quantity is undefined because the band gap is closed.
class GapClosed : public Error {
 public:
  using Error::Error;
};

// The two coin angles do not form a topological phase boundary.
class NoBoundary : public Error {
 public:
  NoBoundary(const std::string& what, double omega_boundary, double omega_bulk)
      : Error(what), omega_boundary_(omega_boundary), omega_bulk_(omega_bulk) {}

  double omega_boundary() const noexcept { return omega_boundary_; }
  double omega_bulk() const noexcept { return omega_bulk_; }

 private:
  double omega_boundary_;
  double omega_bulk_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqw
