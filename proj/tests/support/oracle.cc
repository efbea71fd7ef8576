#include "support/oracle.h"

#include <cmath>
#include <limits>

namespace tripplan::test {

using geodata::map_edge;
using geodata::mode;

namespace {

constexpr auto const kDayEnd = std::int64_t{86'400};

struct move {
  std::int64_t wait_{0}, duration_{0}, fare_cents_{0};
  int ride_line_{-1}, ride_stop_{-1};
};

// One edge taken at absolute time `now`.
std::optional<move> traverse(geodata::map_graph const& g,
                             pcf::fare_config const& fares, map_edge const& e,
                             std::int64_t const now, bool const in_taxi,
                             int const ride_line, int const ride_stop) {
  auto m = move{};
  if (auto const* s = std::get_if<geodata::schedule_ref>(&e.traversal_)) {
    auto const& line = g.lines_[s->line_];
    auto offset = std::int64_t{0};
    for (auto k = 0U; k != s->stop_index_; ++k) {
      offset += line.leg_durations_s_[k];
    }
    auto dep = std::optional<std::int64_t>{};
    for (auto const d : line.departures_s_) {
      if (d + offset >= now) {
        dep = d + offset;
        break;
      }
    }
    if (!dep.has_value()) {
      return std::nullopt;
    }
    m.wait_ = *dep - now;
    m.duration_ = line.leg_durations_s_[s->stop_index_];
    auto const same_vehicle = m.wait_ == 0 &&
                              ride_line == static_cast<int>(s->line_) &&
                              ride_stop == static_cast<int>(s->stop_index_);
    m.fare_cents_ = same_vehicle ? 0 : line.boarding_fare_cents_;
    m.ride_line_ = static_cast<int>(s->line_);
    m.ride_stop_ = static_cast<int>(s->stop_index_) + 1;
  } else {
    m.duration_ = std::get<geodata::fixed_duration>(e.traversal_).seconds_;
    // half-cent ties round away from zero on cents_per_km * metres / 1000
    auto const per_km = [&](std::int64_t const cents) {
      return std::llround(static_cast<double>(cents) * e.length_m_ / 1000.0);
    };
    if (e.mode_ == mode::kTaxi) {
      m.fare_cents_ = (in_taxi ? 0 : fares.taxi_base_cents_) +
                      per_km(fares.taxi_per_km_cents_);
    } else if (e.mode_ == mode::kCar) {
      m.fare_cents_ = per_km(fares.car_per_km_cents_);
    }
  }
  if (now + m.wait_ + m.duration_ > kDayEnd) {
    return std::nullopt;
  }
  return m;
}

// Dollars added by one move that enters node `to`.
double move_cost(search::plan_request const& req, map_edge const& e,
                 move const& m, bool const attribute_wait) {
  auto const& p = req.profile_;
  auto const seconds = m.duration_ + (attribute_wait ? m.wait_ : 0);
  auto cost = p.beta_time_ * p.alpha_[geodata::idx(e.mode_)] *
                  static_cast<double>(seconds) / 3600.0 +
              static_cast<double>(m.fare_cents_) / 100.0;
  for (auto const& o : req.overlays_) {
    cost += p.beta_aux(o.name_) * o.scores_[e.to_];
  }
  return cost;
}

struct walker {
  struct aux_acc {
    double sum_{0.0}, max_{0.0}, min_{0.0}, here_{0.0};
    int count_{0};
  };

  ltl::state_snapshot snapshot(std::optional<mode> const m,
                               search::plan_request const& req) const {
    auto s = ltl::state_snapshot{};
    s.mode_ = m;
    s.time_s_ = time_;
    s.fare_cents_ = fare_;
    s.clock_s_ = now_ - req.depart_s_;
    for (auto i = 0U; i != aux_.size(); ++i) {
      auto const& a = aux_[i];
      s.aux_.push_back({req.overlays_[i].name_, a.sum_, a.max_, a.min_,
                        a.sum_ / a.count_, a.here_});
    }
    return s;
  }

  void enter(search::plan_request const& req, geodata::node_idx_t const n) {
    node_ = n;
    for (auto i = 0U; i != aux_.size(); ++i) {
      auto const v = req.overlays_[i].scores_[n];
      auto& a = aux_[i];
      a.max_ = a.count_ == 0 ? v : std::max(a.max_, v);
      a.min_ = a.count_ == 0 ? v : std::min(a.min_, v);
      a.sum_ += v;
      a.here_ = v;
      ++a.count_;
    }
  }

  geodata::node_idx_t node_{0U};
  std::int64_t now_{0};
  bool in_taxi_{false};
  int ride_line_{-1}, ride_stop_{-1};
  std::array<std::int64_t, geodata::kNumModes> time_{}, fare_{};
  std::vector<aux_acc> aux_;
  double cost_{0.0};
};

struct enumerator {
  void dfs(walker const& w, std::uint32_t const depth) {
    if (best_.has_value() && w.cost_ > *best_ + 1e-9) {
      return;
    }
    if (depth != 0U && w.node_ == req_.to_) {
      ++result_.goal_checks_;
      if (ltl::eval(req_.constraint_, trajectory_) &&
          (!best_.has_value() || w.cost_ < *best_ - 1e-9)) {
        best_ = w.cost_;
        result_.best_edges_ = edges_;
      }
    }
    if (depth == max_steps_) {
      return;
    }
    for (auto i = 0U; i != g_.edges_.size(); ++i) {
      auto const& e = g_.edges_[i];
      if (e.from_ != w.node_ || !req_.allowed_modes_.contains(e.mode_)) {
        continue;
      }
      auto const m = traverse(g_, fares_, e, w.now_, w.in_taxi_, w.ride_line_,
                              w.ride_stop_);
      if (!m.has_value()) {
        continue;
      }
      auto next = w;
      next.now_ += m->wait_ + m->duration_;
      next.in_taxi_ = e.mode_ == mode::kTaxi;
      next.ride_line_ = m->ride_line_;
      next.ride_stop_ = m->ride_stop_;
      next.time_[geodata::idx(e.mode_)] +=
          m->duration_ + (attribute_wait_ ? m->wait_ : 0);
      next.fare_[geodata::idx(e.mode_)] += m->fare_cents_;
      next.cost_ += move_cost(req_, e, *m, attribute_wait_);
      next.enter(req_, e.to_);

      trajectory_.push_back(next.snapshot(e.mode_, req_));
      edges_.push_back(i);
      dfs(next, depth + 1U);
      edges_.pop_back();
      trajectory_.pop_back();
    }
  }

  geodata::map_graph const& g_;
  search::plan_request const& req_;
  pcf::fare_config const& fares_;
  std::uint32_t max_steps_;
  bool attribute_wait_;
  std::optional<double> best_;
  std::vector<ltl::state_snapshot> trajectory_;
  std::vector<std::uint32_t> edges_;
  oracle_result result_;
};

walker start(search::plan_request const& req) {
  auto w = walker{};
  w.now_ = req.depart_s_;
  w.aux_.resize(req.overlays_.size());
  w.enter(req, req.from_);
  for (auto const& o : req.overlays_) {
    w.cost_ += req.profile_.beta_aux(o.name_) * o.scores_[req.from_];
  }
  return w;
}

}  // namespace

oracle_result brute_force_optimum(geodata::map_graph const& g,
                                  search::plan_request const& req,
                                  pcf::fare_config const& fares,
                                  std::uint32_t const max_steps,
                                  bool const attribute_wait) {
  auto e = enumerator{g, req, fares, max_steps, attribute_wait, std::nullopt,
                      {}, {}, {}};
  auto const w = start(req);
  e.trajectory_.push_back(w.snapshot(std::nullopt, req));
  e.dfs(w, 0U);
  if (e.best_.has_value()) {
    e.result_.best_cents_ = std::llround(*e.best_ * 100.0);
  }
  return e.result_;
}

std::optional<double> trajectory_cost(geodata::map_graph const& g,
                                      search::plan_request const& req,
                                      pcf::fare_config const& fares,
                                      std::span<std::uint32_t const> edges,
                                      bool const attribute_wait) {
  auto w = start(req);
  for (auto const i : edges) {
    auto const& e = g.edges_[i];
    if (e.from_ != w.node_) {
      return std::nullopt;
    }
    auto const m = traverse(g, fares, e, w.now_, w.in_taxi_, w.ride_line_,
                            w.ride_stop_);
    if (!m.has_value()) {
      return std::nullopt;
    }
    w.now_ += m->wait_ + m->duration_;
    w.in_taxi_ = e.mode_ == mode::kTaxi;
    w.ride_line_ = m->ride_line_;
    w.ride_stop_ = m->ride_stop_;
    w.cost_ += move_cost(req, e, *m, attribute_wait);
    w.node_ = e.to_;
  }
  return w.cost_;
}

remaining_cost_oracle::remaining_cost_oracle(geodata::map_graph const& g,
                                             search::plan_request const& req,
                                             pcf::fare_config const& fares,
                                             std::uint32_t const max_steps,
                                             bool const attribute_wait)
    : g_{g},
      req_{req},
      fares_{fares},
      max_steps_{max_steps},
      attribute_wait_{attribute_wait} {}

std::optional<double> remaining_cost_oracle::operator()(
    search::label const& l) {
  auto const ride_line =
      l.ride_.has_value() ? static_cast<int>(l.ride_->line_) : -1;
  auto const ride_stop =
      l.ride_.has_value() ? static_cast<int>(l.ride_->stop_index_) : -1;
  return solve(l.node_, req_.depart_s_ + l.vars_.clock_s_,
               l.arrival_mode_ == mode::kTaxi, ride_line, ride_stop,
               max_steps_ - l.steps_);
}

std::optional<double> remaining_cost_oracle::solve(
    geodata::node_idx_t const node, std::int64_t const now, bool const in_taxi,
    int const ride_line, int const ride_stop, std::uint32_t const steps_left) {
  if (node == req_.to_) {
    return 0.0;
  }
  if (steps_left == 0U) {
    return std::nullopt;
  }
  auto const k = key{node, now, in_taxi, ride_line, ride_stop, steps_left};
  if (auto const it = memo_.find(k); it != end(memo_)) {
    return it->second;
  }
  auto best = std::optional<double>{};
  for (auto const& e : g_.edges_) {
    if (e.from_ != node || !req_.allowed_modes_.contains(e.mode_)) {
      continue;
    }
    auto const m =
        traverse(g_, fares_, e, now, in_taxi, ride_line, ride_stop);
    if (!m.has_value()) {
      continue;
    }
    auto const rest =
        solve(e.to_, now + m->wait_ + m->duration_, e.mode_ == mode::kTaxi,
              m->ride_line_, m->ride_stop_, steps_left - 1U);
    if (!rest.has_value()) {
      continue;
    }
    auto const total = move_cost(req_, e, *m, attribute_wait_) + *rest;
    best = best.has_value() ? std::min(*best, total) : total;
  }
  memo_.emplace(k, best);
  return best;
}

}  // namespace tripplan::test
