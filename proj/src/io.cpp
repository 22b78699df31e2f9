#include "nmntt/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nmntt {

namespace {

[[noreturn]] void bad_token(std::size_t index, const std::string& token,
                            const char* why) {
  throw std::runtime_error("coefficient " + std::to_string(index) + " ('" +
                           token + "'): " + why);
}

}  // namespace

Polynomial read_coefficients(std::istream& in, std::uint32_t n,
                             FieldElement q) {
  Polynomial poly;
  poly.reserve(n);
  std::string token;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!(in >> token)) {
      throw std::runtime_error("expected " + std::to_string(n) +
                               " coefficients, found " + std::to_string(i));
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range) {
      bad_token(i, token, "value does not fit 64 bits");
    }
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      bad_token(i, token, "not an unsigned decimal integer");
    }
    if (value >= q) bad_token(i, token, "not in [0, q)");
    poly.push_back(static_cast<FieldElement>(value));
  }
  if (in >> token) {
    throw std::runtime_error("trailing data after " + std::to_string(n) +
                             " coefficients: '" + token + "'");
  }
  return poly;
}

Polynomial read_coefficients_file(const std::string& path, std::uint32_t n,
                                  FieldElement q) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_coefficients(in, n, q);
}

void write_coefficients(std::ostream& out, const Polynomial& poly) {
  for (FieldElement c : poly) {
    out << c << '\n';
  }
}

void write_coefficients_file(const std::string& path, const Polynomial& poly) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_coefficients(out, poly);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace nmntt
