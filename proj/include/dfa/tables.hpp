#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

#include "dfa/charfunc.hpp"

namespace dfa {

struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Worker count for table fills, from DFA_THREADS (default 1).
inline int table_threads() {
  const char* env = std::getenv("DFA_THREADS");
  if (!env || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1 || n > 256)
    throw TableError("DFA_THREADS must be an integer in [1, 256]");
  return int(n);
}

struct Grid {
  double min = 0, max = 0;
  int steps = 0;  // number of intervals; steps + 1 sample points

  int points() const { return steps + 1; }
  double at(int i) const {
    if (steps == 0) return min;
    return min + (max - min) * i / steps;
  }
};

/// "MIN:MAX:STEPS"
inline Grid parse_grid(const std::string& text) {
  Grid g;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.min, &g.max, &g.steps,
                  &trail) != 3)
    throw TableError("grid must be MIN:MAX:STEPS, got \"" + text + "\"");
  if (g.steps < 1 || g.steps > 2'000'000)
    throw TableError("grid steps must be in [1, 2000000]");
  if (!(g.min < g.max)) throw TableError("grid requires MIN < MAX");
  return g;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    out << (i ? "," : "") << t.header[i];
  out << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_sig17(row[i]);
    out << "\r\n";
  }
}

namespace table_detail {

/// Row i is always computed from grid point i, whichever worker picks it
/// up, so the filled table is independent of the thread count.
template <typename RowFn>
void fill_rows(Table& t, const Grid& g, RowFn row_fn) {
  t.rows.assign(g.points(), {});
  const int workers = std::min(table_threads(), g.points());
  if (workers <= 1) {
    for (int i = 0; i < g.points(); ++i) t.rows[i] = row_fn(g.at(i));
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < g.points();) {
        try {
          t.rows[i] = row_fn(g.at(i));
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace table_detail

/// Densities of i(a-a^dag) + alpha(d+d^dag) against the free Gaussian.
inline Table density_table_defI(double ff, const std::vector<double>& alphas,
                                const Grid& g) {
  Table t;
  t.header = {"x", "gaussian"};
  for (double a : alphas) t.header.push_back("defI_alpha=" + table_detail::short_num(a));
  table_detail::fill_rows(t, g, [&](double x) {
    std::vector<double> row{x, gaussian_density(x, 0, ff)};
    for (double a : alphas) row.push_back(dens_defI(x, ff, std::abs(a)));
    return row;
  });
  return t;
}

/// Densities of i(a-a^dag)(d+d^dag)^k, k in {1, 2}, against the free
/// Gaussian. The singular point x = 0 is reported as nan.
inline Table density_table_defII(double ff, const std::vector<int>& ks,
                                 const Grid& g) {
  for (int k : ks)
    if (k != 1 && k != 2)
      throw TableError("defII density table supports k = 1 and k = 2");
  Table t;
  t.header = {"x", "gaussian"};
  for (int k : ks) t.header.push_back("defII_k=" + std::to_string(k));
  table_detail::fill_rows(t, g, [&](double x) {
    std::vector<double> row{x, gaussian_density(x, 0, ff)};
    for (int k : ks) {
      if (x == 0) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        row.push_back(k == 1 ? dens_defII(x, ff) : dens_defII_k2(x, ff));
      }
    }
    return row;
  });
  return t;
}

/// Characteristic functions sampled on a lambda grid; one re/im column
/// pair per named series.
inline Table char_table(const std::vector<std::pair<std::string, CharFn>>& series,
                        const Grid& g) {
  Table t;
  t.header = {"lambda"};
  for (const auto& [name, fn] : series) {
    t.header.push_back("re_" + name);
    t.header.push_back("im_" + name);
  }
  table_detail::fill_rows(t, g, [&](double lam) {
    std::vector<double> row{lam};
    for (const auto& [name, fn] : series) {
      const Complex v = fn(lam);
      row.push_back(v.real());
      row.push_back(v.imag());
    }
    return row;
  });
  return t;
}

}  // namespace dfa
