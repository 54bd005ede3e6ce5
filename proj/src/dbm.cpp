#include "ptasynth/dbm.hpp"

#include <sstream>

#include "ptasynth/params.hpp"

namespace ptasynth {

std::string dbm::to_string(raw_t raw) {
  if (raw == kInfinity) return "< inf";
  return std::string(is_strict(raw) ? "< " : "<= ") + std::to_string(value_of(raw));
}

Dbm::Dbm(std::size_t dim) : dim_(dim), m_(dim * dim, dbm::kLeZero) {}

Dbm Dbm::universe(std::size_t dim) {
  Dbm d(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i != j && j != 0) d.at(i, j) = dbm::kInfinity;
    }
  }
  for (std::size_t i = 1; i < dim; ++i) d.at(i, 0) = dbm::kInfinity;
  return d;
}

bool Dbm::close() {
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const raw_t ik = at(i, k);
      if (ik == dbm::kInfinity) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        const raw_t via = dbm::add(ik, at(k, j));
        if (via < at(i, j)) at(i, j) = via;
      }
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      if (at(i, i) < dbm::kLeZero) return false;
    }
  }
  return true;
}

bool Dbm::is_empty() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (at(i, i) < dbm::kLeZero) return true;
  }
  return false;
}

void Dbm::up() {
  for (std::size_t i = 1; i < dim_; ++i) at(i, 0) = dbm::kInfinity;
}

void Dbm::reset(std::size_t clock) {
  for (std::size_t j = 0; j < dim_; ++j) {
    if (j == clock) continue;
    at(clock, j) = at(0, j);
    at(j, clock) = at(j, 0);
  }
}

bool Dbm::constrain(std::size_t i, std::size_t j, raw_t raw) {
  if (raw >= at(i, j)) return !is_empty();
  if (dbm::add(at(j, i), raw) < dbm::kLeZero) {
    at(i, j) = raw;
    at(i, i) = dbm::add(at(j, i), raw);
    return false;
  }
  at(i, j) = raw;
  // Only paths through the new edge can get shorter.
  for (std::size_t a = 0; a < dim_; ++a) {
    const raw_t ai = at(a, i);
    if (ai == dbm::kInfinity) continue;
    const raw_t aij = dbm::add(ai, raw);
    for (std::size_t b = 0; b < dim_; ++b) {
      const raw_t via = dbm::add(aij, at(j, b));
      if (via < at(a, b)) at(a, b) = via;
    }
  }
  return !is_empty();
}

void Dbm::extrapolate(const std::vector<std::int64_t>& max) {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      const raw_t e = at(i, j);
      if (e == dbm::kInfinity) continue;
      if (dbm::value_of(e) > max[i]) {
        at(i, j) = dbm::kInfinity;
      } else if (dbm::value_of(e) < -max[j]) {
        at(i, j) = dbm::lt(-max[j]);
      }
    }
  }
}

bool Dbm::satisfies(std::size_t i, std::size_t j, raw_t raw) const {
  return dbm::add(at(j, i), raw) >= dbm::kLeZero;
}

std::size_t Dbm::hash() const {
  std::size_t seed = dim_;
  for (const raw_t r : m_) hash_combine(seed, std::hash<raw_t>{}(r));
  return seed;
}

std::string Dbm::to_string(const std::vector<std::string>& clocks) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j || at(i, j) == dbm::kInfinity) continue;
      out << (i == 0 ? "0" : clocks.at(i)) << " - " << (j == 0 ? "0" : clocks.at(j)) << ' '
          << dbm::to_string(at(i, j)) << '\n';
    }
  }
  return out.str();
}

}  // namespace ptasynth
