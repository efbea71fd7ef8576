#include "support/random_instance.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "fmt/core.h"
#include "nlohmann/json.hpp"

#include "tripplan/geodata/geo.h"
#include "tripplan/ltl/parse.h"

namespace tripplan::test {

using geodata::mode;

std::vector<std::string> constraint_pool(std::vector<mode> const& modes,
                                         bool const with_aux) {
  auto const a = geodata::to_str(modes.front());
  auto const b = geodata::to_str(modes.back());
  return {
      "true",
      "G(!(mode=car))",
      "(mode=bike | mode=public) AFTER G(!(mode=car))",
      fmt::format("F(time({}) >= 300) & G(time({}) <= 900)", a, a),
      "G(fare(public) <= 3) & G(fare(taxi) <= 12)",
      fmt::format("F(mode={}) | G(clock <= 1800)", b),
      with_aux ? std::string{"G(aux_here(crime) <= 2)"}
               : fmt::format("X(!(mode={}))", a),
      with_aux ? std::string{"F(aux(crime, sum) >= 3) | G(aux(crime, max) <= 1)"}
               : fmt::format("mode={} AFTER G(mode={})", a, a)};
}

void make_random_instance(std::uint64_t const seed, random_instance& out) {
  auto rng = std::mt19937_64{seed};
  auto const uniform = [&](int const lo, int const hi) {
    return std::uniform_int_distribution<int>{lo, hi}(rng);
  };
  auto const real = [&](double const lo, double const hi) {
    return std::uniform_real_distribution<double>{lo, hi}(rng);
  };

  out.seed_ = seed;
  auto const n = uniform(4, 12);
  auto pos = std::vector<geodata::latlon>{};
  auto nodes = std::string{"id,lat,lon,kind\n"};
  for (auto i = 0; i != n; ++i) {
    pos.push_back({37.70 + real(0.0, 0.03), -122.45 + real(0.0, 0.04)});
    nodes += fmt::format("n{:02},{:.6f},{:.6f},street_corner\n", i,
                         pos.back().lat_, pos.back().lon_);
  }
  auto const dist = [&](int const a, int const b) {
    return geodata::great_circle_distance(pos[a], pos[b]);
  };
  auto const pick_pair = [&]() {
    auto const a = uniform(0, n - 1);
    auto b = uniform(0, n - 2);
    b += b >= a ? 1 : 0;
    return std::pair{a, b};
  };

  auto all = std::vector<mode>(begin(geodata::kAllModes), end(geodata::kAllModes));
  std::shuffle(begin(all), end(all), rng);
  auto modes = std::vector<mode>(begin(all), begin(all) + uniform(1, 3));
  std::sort(begin(modes), end(modes));

  auto edges = std::string{"from,to,mode,length_m,duration_s,line\n"};
  auto lines = nlohmann::json::array();
  if (std::find(begin(modes), end(modes), mode::kPublic) != end(modes)) {
    auto const n_lines = uniform(1, 2);
    for (auto l = 0; l != n_lines; ++l) {
      auto stops = std::vector<int>(static_cast<std::size_t>(n));
      for (auto i = 0; i != n; ++i) {
        stops[i] = i;
      }
      std::shuffle(begin(stops), end(stops), rng);
      stops.resize(static_cast<std::size_t>(std::min(n, uniform(2, 4))));

      auto stop_ids = nlohmann::json::array();
      auto legs = std::vector<std::int64_t>{};
      for (auto k = 0U; k != stops.size(); ++k) {
        stop_ids.push_back(fmt::format("n{:02}", stops[k]));
        if (k + 1U != stops.size()) {
          legs.push_back(60 * uniform(1, 8));
          edges += fmt::format(
              "n{:02},n{:02},public,{},,L{}\n", stops[k], stops[k + 1U],
              std::max(1L, std::lround(dist(stops[k], stops[k + 1U]) * 1.1)),
              l);
        }
      }
      auto deps = std::vector<std::int64_t>{};
      auto t = std::int64_t{25200 + 60 * uniform(0, 20)};
      auto const headway = 60 * uniform(5, 20);
      for (auto trips = uniform(2, 5); trips != 0; --trips, t += headway) {
        deps.push_back(t);
      }
      lines.push_back({{"id", fmt::format("L{}", l)},
                       {"stops", stop_ids},
                       {"departures_s", deps},
                       {"leg_durations_s", legs},
                       {"boarding_fare_usd", 0.25 * uniform(0, 12)}});
    }
  }

  auto street = std::vector<mode>{};
  std::copy_if(begin(modes), end(modes), std::back_inserter(street),
               [](mode const m) { return m != mode::kPublic; });
  if (!street.empty()) {
    for (auto e = uniform(n, 3 * n); e != 0; --e) {
      auto const [a, b] = pick_pair();
      auto const m = street[static_cast<std::size_t>(
          uniform(0, static_cast<int>(street.size()) - 1))];
      edges += fmt::format("n{:02},n{:02},{},{},{},\n", a, b,
                           geodata::to_str(m),
                           std::max(1L, std::lround(dist(a, b) * real(1.0, 1.4))),
                           60 * uniform(1, 15));
    }
  }

  out.graph_ = geodata::load_graph(nodes, edges, lines.dump());
  out.fares_ = pcf::fare_config{};

  auto& r = out.request_;
  r = search::plan_request{};
  auto const [from, to] = pick_pair();
  r.from_ = static_cast<search::node_idx_t>(from);
  r.to_ = static_cast<search::node_idx_t>(to);
  r.depart_s_ = 25200 + 60 * uniform(0, 30);
  r.profile_.beta_time_ = uniform(0, 1) == 0 ? 36.0 : 72.0;
  for (auto& a : r.profile_.alpha_) {
    a = 0.25 * uniform(1, 16);
  }

  out.dataset_names_.clear();
  out.scores_.clear();
  auto const with_aux = uniform(0, 1) == 1;
  if (with_aux) {
    out.dataset_names_.push_back("crime");
    auto& s = out.scores_.emplace_back();
    for (auto i = 0; i != n; ++i) {
      s.push_back(static_cast<double>(uniform(0, 3)));
    }
    r.profile_.beta_aux_["crime"] = std::array{0.0, 0.25, 1.0}[uniform(0, 2)];
    r.overlays_.push_back({"crime", out.scores_.back()});
  }

  auto const pool = constraint_pool(modes, with_aux);
  out.constraint_text_ = pool[static_cast<std::size_t>(
      uniform(0, static_cast<int>(pool.size()) - 1))];
  r.constraint_ = ltl::parse(out.constraint_text_);
}

}  // namespace tripplan::test
