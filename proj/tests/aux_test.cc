#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "tripplan/auxmetrics/kernels.h"
#include "tripplan/auxmetrics/overlay.h"
#include "tripplan/error.h"

#include "support/fixtures.h"

using namespace tripplan;
using namespace tripplan::auxmetrics;
using geodata::latlon;

namespace {

// Written out independently of the library.
double haversine(latlon const& a, latlon const& b) {
  constexpr auto const kR = 6371000.0;
  auto const rad = std::numbers::pi / 180.0;
  auto const dlat = (b.lat_ - a.lat_) * rad;
  auto const dlon = (b.lon_ - a.lon_) * rad;
  auto const h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                 std::cos(a.lat_ * rad) * std::cos(b.lat_ * rad) *
                     std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kR * std::asin(std::min(1.0, std::sqrt(h)));
}

double brute_force(latlon const& n, std::vector<latlon> const& pts,
                   double const r) {
  auto sum = 0.0;
  for (auto const& p : pts) {
    auto const d = haversine(n, p);
    sum += d <= r ? 1.0 - d / r : 0.0;
  }
  return sum;
}

// Same sum over the library's per-pair score: isolates the spatial index.
double linear_scan(latlon const& n, std::vector<latlon> const& pts,
                   double const r) {
  auto sum = 0.0;
  for (auto const& p : pts) {
    sum += point_score(n, p, r);
  }
  return sum;
}

// The two haversine forms drift apart by ~1e-7 m near the poles.
constexpr auto const kIndependentTol = 1e-6;

geodata::map_graph graph_of(std::vector<latlon> const& pos) {
  auto g = geodata::map_graph{};
  for (auto i = 0U; i != pos.size(); ++i) {
    g.id_to_idx_.emplace(std::to_string(i), i);
    g.nodes_.push_back({std::to_string(i), pos[i], {}});
    g.offsets_.push_back(0U);
  }
  return g;
}

aux_dataset dataset_of(std::vector<latlon> pts) {
  auto d = aux_dataset{};
  d.id_ = "d";
  d.name_ = "d";
  d.points_ = std::move(pts);
  return d;
}

struct cluster {
  latlon center_;
  double spread_deg_;
};

std::vector<latlon> scatter(std::mt19937_64& rng, cluster const& c,
                            std::size_t const n) {
  auto u = std::uniform_real_distribution<double>{-1.0, 1.0};
  auto out = std::vector<latlon>{};
  for (auto i = 0U; i != n; ++i) {
    auto lat = std::clamp(c.center_.lat_ + c.spread_deg_ * u(rng), -90.0, 90.0);
    auto lon = c.center_.lon_ + c.spread_deg_ * u(rng);
    lon = lon > 180.0 ? lon - 360.0 : lon < -180.0 ? lon + 360.0 : lon;
    out.push_back({lat, lon});
  }
  return out;
}

}  // namespace

TEST(aux, point_score_boundaries) {
  auto const a = latlon{37.77, -122.42};
  auto const b = latlon{37.771, -122.421};
  auto const d = geodata::great_circle_distance(a, b);
  EXPECT_EQ(1.0, point_score(a, a, 100.0));
  EXPECT_EQ(0.0, point_score(a, b, d));
  EXPECT_EQ(0.5, point_score(a, b, 2.0 * d));
  EXPECT_EQ(0.0, point_score(a, b, d / 2.0));
}

TEST(aux, nonpositive_radius) {
  auto const a = latlon{0.0, 0.0};
  for (auto const r : {0.0, -1.0}) {
    try {
      point_score(a, a, r);
      FAIL();
    } catch (error const& e) {
      EXPECT_EQ(error_code::kNonpositiveRadius, e.code());
    }
    EXPECT_THROW(build_overlay(graph_of({a}), dataset_of({a}), r), error);
  }
}

TEST(aux, coincident_points_sum) {
  auto const x = latlon{37.77, -122.42};
  auto const g = graph_of({x, {37.9, -122.42}});
  EXPECT_EQ(1.0, build_overlay(g, dataset_of({x}), 100.0).node_scores_[0]);
  auto const two = build_overlay(g, dataset_of({x, x}), 100.0);
  EXPECT_EQ(2.0, two.node_scores_[0]);
  EXPECT_EQ(0.0, two.node_scores_[1]);
  EXPECT_EQ(2.0, node_score(two, g, "0"));
  EXPECT_EQ(0.0, node_score(two, g, "1"));
}

TEST(aux, unknown_node) {
  auto const g = graph_of({{0.0, 0.0}});
  auto const o = build_overlay(g, dataset_of({{0.0, 0.0}}), 10.0);
  try {
    node_score(o, g, "nope");
    FAIL();
  } catch (error const& e) {
    EXPECT_EQ(error_code::kUnknownNode, e.code());
  }
}

TEST(aux, parse_csv) {
  auto const pts = parse_aux_csv("lat,lon\n37.5,-122.1\n37.6,-122.2\n");
  ASSERT_EQ(2U, pts.size());
  EXPECT_EQ(-122.2, pts[1].lon_);
  EXPECT_THROW(parse_aux_csv(""), error);
  EXPECT_THROW(parse_aux_csv("lat,lon\n"), error);
  EXPECT_THROW(parse_aux_csv("lon,lat\n1,2\n"), error);
  EXPECT_THROW(parse_aux_csv("lat,lon\n95,2\n"), error);
  EXPECT_THROW(parse_aux_csv("lat,lon\nx,2\n"), error);
}

TEST(aux, bob_fixture_scores) {
  auto const net = test::load_fixture("bob");
  auto const pts = parse_aux_csv(test::read_fixture("bob", "crime.csv"));
  auto const o = build_overlay(net.graph_, dataset_of(pts), 50.0);
  EXPECT_EQ(20.0, node_score(o, net.graph_, "r2c2"));
  EXPECT_EQ(5.0, node_score(o, net.graph_, "r2c1"));
  EXPECT_EQ(8.0, node_score(o, net.graph_, "r2c3"));
  EXPECT_EQ(0.0, node_score(o, net.graph_, "r0c2"));
  for (auto n = 0U; n != net.graph_.node_count(); ++n) {
    EXPECT_EQ(brute_force(net.graph_.nodes_[n].pos_, pts, 50.0),
              o.node_scores_[n]);
  }
}

TEST(aux, grid_matches_brute_force) {
  auto rng = std::mt19937_64{11U};
  auto const clusters = std::vector<cluster>{{{37.77, -122.42}, 0.05},
                                             {{0.0, 179.99}, 0.02},
                                             {{89.99, 10.0}, 0.02},
                                             {{-60.0, -70.0}, 0.2}};
  for (auto const& c : clusters) {
    for (auto const r : {50.0, 300.0, 1000.0}) {
      auto const nodes = scatter(rng, c, 60U);
      auto const pts = scatter(rng, c, 150U);
      auto const g = graph_of(nodes);
      for (auto const i : {kernels::isa::kScalar, kernels::best_isa()}) {
        auto const o = build_overlay(g, dataset_of(pts), r, i);
        for (auto n = 0U; n != nodes.size(); ++n) {
          EXPECT_NEAR(linear_scan(nodes[n], pts, r), o.node_scores_[n], 1e-9);
          EXPECT_NEAR(brute_force(nodes[n], pts, r), o.node_scores_[n],
                      kIndependentTol);
          EXPECT_GE(o.node_scores_[n], 0.0);
          EXPECT_LE(o.node_scores_[n], static_cast<double>(pts.size()));
        }
      }
    }
  }
}

TEST(aux, grid_candidates_superset) {
  auto rng = std::mt19937_64{5U};
  auto const pts = scatter(rng, {{45.0, 7.0}, 0.05}, 400U);
  auto const grid = point_grid{pts, 250.0, 46.0};
  EXPECT_GT(grid.rows() * grid.cols(), 1U);
  auto out = std::vector<std::uint32_t>{};
  for (auto const& q : scatter(rng, {{45.0, 7.0}, 0.05}, 100U)) {
    grid.candidates(q, out);
    EXPECT_TRUE(std::is_sorted(begin(out), end(out)));
    for (auto i = 0U; i != pts.size(); ++i) {
      if (haversine(q, pts[i]) <= 250.0) {
        EXPECT_TRUE(std::binary_search(begin(out), end(out), i));
      }
    }
  }
}

TEST(aux, kernels_bit_identical) {
  if (!kernels::is_supported(kernels::isa::kAvx2)) {
    GTEST_SKIP() << "no AVX2 on this host";
  }
  auto rng = std::mt19937_64{17U};
  auto u = std::uniform_real_distribution<double>{-1.0, 1.0};
  for (auto const n : {0U, 1U, 3U, 4U, 5U, 31U, 1000U}) {
    auto xs = std::vector<double>(n), ys = xs, zs = xs;
    for (auto i = 0U; i != n; ++i) {
      xs[i] = u(rng);
      ys[i] = u(rng);
      zs[i] = u(rng);
    }
    auto const q = kernels::unit_vec{u(rng), u(rng), u(rng)};
    auto a = std::vector<double>(n), b = a;
    kernels::chord2(kernels::isa::kScalar, q, xs, ys, zs, a);
    kernels::chord2(kernels::isa::kAvx2, q, xs, ys, zs, b);
    for (auto i = 0U; i != n; ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i]),
                std::bit_cast<std::uint64_t>(b[i]));
    }
  }
}

TEST(aux, overlay_isa_independent) {
  if (!kernels::is_supported(kernels::isa::kAvx2)) {
    GTEST_SKIP() << "no AVX2 on this host";
  }
  auto rng = std::mt19937_64{23U};
  auto const nodes = scatter(rng, {{37.77, -122.42}, 0.02}, 200U);
  auto const pts = scatter(rng, {{37.77, -122.42}, 0.02}, 500U);
  auto const g = graph_of(nodes);
  auto const a = build_overlay(g, dataset_of(pts), 400.0, kernels::isa::kScalar);
  auto const b = build_overlay(g, dataset_of(pts), 400.0, kernels::isa::kAvx2);
  EXPECT_EQ(a.node_scores_, b.node_scores_);
}

TEST(aux, monotone_in_radius) {
  auto rng = std::mt19937_64{29U};
  auto const nodes = scatter(rng, {{37.77, -122.42}, 0.02}, 50U);
  auto const pts = scatter(rng, {{37.77, -122.42}, 0.02}, 100U);
  auto const g = graph_of(nodes);
  auto prev = std::vector<double>(nodes.size(), 0.0);
  for (auto const r : {10.0, 100.0, 250.0, 500.0, 1000.0, 3000.0}) {
    auto const o = build_overlay(g, dataset_of(pts), r);
    for (auto n = 0U; n != nodes.size(); ++n) {
      EXPECT_LE(prev[n], o.node_scores_[n]);
    }
    prev = o.node_scores_;
  }
}

TEST(aux, union_is_sum) {
  auto rng = std::mt19937_64{31U};
  auto const nodes = scatter(rng, {{37.77, -122.42}, 0.02}, 50U);
  auto const p1 = scatter(rng, {{37.77, -122.42}, 0.02}, 80U);
  auto const p2 = scatter(rng, {{37.77, -122.42}, 0.02}, 120U);
  auto both = p1;
  both.insert(end(both), begin(p2), end(p2));
  auto const g = graph_of(nodes);
  auto const a = build_overlay(g, dataset_of(p1), 600.0);
  auto const b = build_overlay(g, dataset_of(p2), 600.0);
  auto const u = build_overlay(g, dataset_of(both), 600.0);
  for (auto n = 0U; n != nodes.size(); ++n) {
    EXPECT_NEAR(a.node_scores_[n] + b.node_scores_[n], u.node_scores_[n], 1e-9);
  }
}
