#include "sqap/instance.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sqap/errors.hpp"
#include "sqap/random.hpp"

namespace sqap {

Assignment Assignment::from_flat(std::size_t n, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != n * n) {
    throw std::invalid_argument("flat assignment has " + std::to_string(bits.size()) +
                                " entries, expected " + std::to_string(n * n));
  }
  Assignment q(n);
  for (std::size_t k = 0; k < bits.size(); ++k) q.q_.flat()[k] = bits[k] ? 1 : 0;
  return q;
}

Assignment Assignment::identity(std::size_t n) {
  Assignment q(n);
  for (std::size_t i = 0; i < n; ++i) q.set(i, i, true);
  return q;
}

Assignment Assignment::from_permutation(const std::vector<std::size_t>& perm) {
  Assignment q(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size()) throw std::invalid_argument("permutation entry out of range");
    q.set(i, perm[i], true);
  }
  return q;
}

std::size_t Assignment::row_sum(std::size_t i) const {
  std::size_t sum = 0;
  for (std::size_t j = 0; j < size(); ++j) sum += q_(i, j);
  return sum;
}

std::size_t Assignment::col_sum(std::size_t j) const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < size(); ++i) sum += q_(i, j);
  return sum;
}

std::size_t Assignment::ones() const {
  std::size_t sum = 0;
  for (auto b : q_.flat()) sum += b;
  return sum;
}

void QapInstance::validate() const {
  if (n == 0) throw std::invalid_argument("instance size must be positive");
  if (s.size() != n || f.size() != n || d.size() != n) {
    throw std::invalid_argument("instance matrices must all be n x n");
  }
  if (!(w >= 0.0)) throw std::invalid_argument("penalty weight w must be nonnegative");
  for (std::size_t i = 0; i < n; ++i) {
    if (f(i, i) != 0.0) throw std::invalid_argument("similarity diagonal must be zero");
    if (d(i, i) != 0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (std::size_t k = 0; k < n; ++k) {
      if (f(i, k) != f(k, i)) throw std::invalid_argument("similarity must be symmetric");
      if (d(i, k) != d(k, i)) throw std::invalid_argument("adjacency must be symmetric");
      if (d(i, k) > 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
    }
  }
}

QapInstance generate_instance(std::size_t n, std::int64_t seed, const GeneratorConfig& config) {
  if (n == 0) throw std::invalid_argument("generate_instance: n must be >= 1");
  if (config.sales_high < config.sales_low || config.similarity_high < config.similarity_low) {
    throw std::invalid_argument("generate_instance: empty sampling range");
  }
  QapInstance inst;
  inst.n = n;
  inst.w = config.w;
  inst.seed = seed;
  inst.s = RealMatrix(n);
  inst.f = RealMatrix(n);
  inst.d = SquareMatrix<std::uint8_t>(n);

  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inst.s(i, j) = uniform(rng, config.sales_low, config.sales_high);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      double v = uniform(rng, config.similarity_low, config.similarity_high);
      inst.f(i, k) = v;
      inst.f(k, i) = v;
    }
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    inst.d(j, j + 1) = 1;
    inst.d(j + 1, j) = 1;
  }
  if (config.adjacency == Adjacency::ring && n > 2) {
    inst.d(0, n - 1) = 1;
    inst.d(n - 1, 0) = 1;
  }
  return inst;
}

namespace {

void require_same_size(const QapInstance& inst, const Assignment& q) {
  if (q.size() != inst.n) {
    throw std::invalid_argument("assignment is " + std::to_string(q.size()) +
                                "x" + std::to_string(q.size()) + " but instance has n = " +
                                std::to_string(inst.n));
  }
}

}  // namespace

double objective(const QapInstance& inst, const Assignment& q) {
  require_same_size(inst, q);
  const std::size_t n = inst.n;
  // Collect the occupied cells once; the quadratic term only visits pairs of them.
  std::vector<std::pair<std::size_t, std::size_t>> occupied;
  double linear = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (q(i, j)) {
        occupied.emplace_back(i, j);
        linear -= inst.s(i, j);
      }
    }
  }
  double quadratic = 0.0;
  for (const auto& [i, j] : occupied)
    for (const auto& [k, l] : occupied)
      if (inst.d(j, l)) quadratic += inst.f(i, k);
  return linear + inst.w * quadratic;
}

bool is_feasible(const Assignment& q) { return count_violations(q) == 0; }

std::size_t count_violations(const Assignment& q) {
  std::size_t violated = 0;
  for (std::size_t i = 0; i < q.size(); ++i) violated += q.row_sum(i) != 1;
  for (std::size_t j = 0; j < q.size(); ++j) violated += q.col_sum(j) != 1;
  return violated;
}

namespace {

template <class T>
nlohmann::json matrix_to_json(const SquareMatrix<T>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
      if constexpr (std::is_same_v<T, std::uint8_t>) {
        row.push_back(static_cast<int>(m(i, j)));
      } else {
        row.push_back(m(i, j));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
SquareMatrix<T> matrix_from_json(const nlohmann::json& j, std::size_t n, const char* name) {
  if (!j.is_array() || j.size() != n) {
    throw std::invalid_argument(std::string("field '") + name + "' must have n rows");
  }
  SquareMatrix<T> m(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != n) {
      throw std::invalid_argument(std::string("field '") + name + "' must have n columns");
    }
    for (std::size_t c = 0; c < n; ++c) {
      if constexpr (std::is_same_v<T, std::uint8_t>) {
        int v = row[c].get<int>();
        if (v != 0 && v != 1) {
          throw std::invalid_argument(std::string("field '") + name + "' must be 0/1");
        }
        m(r, c) = static_cast<std::uint8_t>(v);
      } else {
        m(r, c) = row[c].get<T>();
      }
    }
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const QapInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["w"] = inst.w;
  j["seed"] = inst.seed;
  j["s"] = matrix_to_json(inst.s);
  j["f"] = matrix_to_json(inst.f);
  j["d"] = matrix_to_json(inst.d);
  return j;
}

QapInstance instance_from_json(const nlohmann::json& j) {
  QapInstance inst;
  try {
    inst.n = j.at("n").get<std::size_t>();
    inst.w = j.at("w").get<double>();
    inst.seed = j.value("seed", std::int64_t{0});
    inst.s = matrix_from_json<double>(j.at("s"), inst.n, "s");
    inst.f = matrix_from_json<double>(j.at("f"), inst.n, "f");
    inst.d = matrix_from_json<std::uint8_t>(j.at("d"), inst.n, "d");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
  inst.validate();
  return inst;
}

nlohmann::json to_json(const Assignment& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < q.size(); ++j) row.push_back(static_cast<int>(q(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", q.size()}, {"q", std::move(rows)}};
}

Assignment assignment_from_json(const nlohmann::json& j) {
  try {
    std::size_t n = j.at("n").get<std::size_t>();
    auto m = matrix_from_json<std::uint8_t>(j.at("q"), n, "q");
    return Assignment::from_flat(n, m.flat());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed assignment: ") + e.what());
  }
}

QapInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const QapInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file '" + path + "'");
  out << to_json(inst).dump() << '\n';
  if (!out) throw IoError("failed writing instance file '" + path + "'");
}

}  // namespace sqap
