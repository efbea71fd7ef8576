#include "tripplan/search/planner.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "fmt/core.h"

#include "tripplan/error.h"
#include "tripplan/geodata/geo.h"

namespace tripplan::search {

using geodata::great_circle_distance;
using geodata::idx;
using geodata::kServiceDayS;
using geodata::map_edge;

namespace {

std::vector<std::string> dataset_names(plan_request const& req) {
  auto names = std::vector<std::string>{};
  for (auto const& o : req.overlays_) {
    names.push_back(o.name_);
  }
  return names;
}

std::int64_t edge_duration_bound(map_graph const& g, map_edge const& e) {
  if (auto const* s = std::get_if<geodata::schedule_ref>(&e.traversal_)) {
    return g.lines_[s->line_].leg_durations_s_[s->stop_index_];
  }
  return std::get<geodata::fixed_duration>(e.traversal_).seconds_;
}

// State variables the constraint can observe. Labels that differ in any of
// them may evolve differently under progression.
struct referenced_vars {
  explicit referenced_vars(ltl::formula const& f,
                           std::span<overlay_ref const> overlays) {
    collect(f, overlays);
  }

  void collect(ltl::formula const& f, std::span<overlay_ref const> overlays) {
    switch (f.get_op()) {
      case ltl::op::kTrue:
      case ltl::op::kFalse: return;
      case ltl::op::kAtom: {
        auto const* c = std::get_if<ltl::var_cmp>(&f.get_atom());
        if (c == nullptr) {
          return;
        }
        switch (c->var_.kind_) {
          case ltl::var_kind::kTime: time_.insert(c->var_.mode_); break;
          case ltl::var_kind::kFare: fare_.insert(c->var_.mode_); break;
          case ltl::var_kind::kClock: clock_ = true; break;
          case ltl::var_kind::kAux:
          case ltl::var_kind::kAuxHere:
            for (auto i = 0U; i != overlays.size(); ++i) {
              if (overlays[i].name_ == c->var_.dataset_ &&
                  std::find(begin(aux_), end(aux_), i) == end(aux_)) {
                aux_.push_back(i);
              }
            }
            break;
        }
        return;
      }
      case ltl::op::kNot:
      case ltl::op::kNext:
      case ltl::op::kAlways:
      case ltl::op::kEventually: collect(f.lhs(), overlays); return;
      case ltl::op::kAnd:
      case ltl::op::kOr:
      case ltl::op::kAfter:
        collect(f.lhs(), overlays);
        collect(f.rhs(), overlays);
        return;
    }
  }

  bool equal(pcf::state_vars const& a, pcf::state_vars const& b) const {
    for (auto const m : geodata::kAllModes) {
      if (time_.contains(m) && a.time_s_[idx(m)] != b.time_s_[idx(m)]) {
        return false;
      }
      if (fare_.contains(m) && a.fare_cents_[idx(m)] != b.fare_cents_[idx(m)]) {
        return false;
      }
    }
    if (clock_ && a.clock_s_ != b.clock_s_) {
      return false;
    }
    return std::all_of(begin(aux_), end(aux_),
                       [&](std::uint32_t const i) { return a.aux_[i] == b.aux_[i]; });
  }

  // An earlier label can mimic a later one by waiting longer at the next
  // boarding, unless the extra wait is observable.
  bool earlier_may_dominate() const {
    return !clock_ && !time_.contains(mode::kPublic);
  }

  mode_set time_, fare_;
  bool clock_{false};
  std::vector<std::uint32_t> aux_;
};

struct dominance {
  bool operator()(label const& a, label const& b) const {
    if (a.residual_ != b.residual_ || (b.accepts_ && !a.accepts_) ||
        a.steps_ > b.steps_ ||
        (a.arrival_mode_ == mode::kTaxi) != (b.arrival_mode_ == mode::kTaxi) ||
        a.ride_.has_value() != b.ride_.has_value() ||
        (a.ride_.has_value() && (a.ride_->line_ != b.ride_->line_ ||
                                 a.ride_->stop_index_ != b.ride_->stop_index_)) ||
        !refs_.equal(a.vars_, b.vars_)) {
      return false;
    }
    if (a.clock_s() == b.clock_s()) {
      return a.g_ <= b.g_;
    }
    if (a.clock_s() < b.clock_s() && refs_.earlier_may_dominate()) {
      auto const extra_wait = static_cast<double>(b.clock_s() - a.clock_s());
      return a.g_ + wait_dollars_per_s_ * extra_wait <= b.g_;
    }
    return false;
  }

  referenced_vars const& refs_;
  double wait_dollars_per_s_;
};

struct queue_entry {
  double f_;
  double g_;
  node_idx_t node_;
  int arrival_mode_;  // -1 for none
  std::uint64_t seq_;
  std::uint32_t label_;
};

}  // namespace

geodata::mode_speeds_t effective_speeds(map_graph const& g) {
  auto s = g.mode_speeds_;
  for (auto const& e : g.edges_) {
    auto const d = great_circle_distance(g.nodes_[e.from_].pos_,
                                         g.nodes_[e.to_].pos_);
    auto const v = d / static_cast<double>(edge_duration_bound(g, e));
    s[idx(e.mode_)] = std::max(s[idx(e.mode_)], v);
  }
  return s;
}

heuristic_table::heuristic_table(map_graph const& g,
                                 pcf::coefficient_profile const& p,
                                 mode_set const allowed,
                                 node_idx_t const goal) {
  auto present = mode_set::none();
  for (auto const& e : g.edges_) {
    present.insert(e.mode_);
  }
  auto const speeds = effective_speeds(g);
  auto best = std::optional<double>{};
  for (auto const m : geodata::kAllModes) {
    if (!allowed.contains(m) || !present.contains(m)) {
      continue;
    }
    auto const rate = p.beta_time_ * p.alpha_[idx(m)] / (speeds[idx(m)] * 3600.0);
    best = best.has_value() ? std::min(*best, rate) : rate;
  }
  dollars_per_m_ = best.value_or(0.0);

  h_.resize(g.node_count());
  for (auto n = node_idx_t{0U}; n != g.node_count(); ++n) {
    h_[n] = n == goal ? 0.0
                      : dollars_per_m_ * great_circle_distance(
                                             g.nodes_[n].pos_, g.nodes_[goal].pos_);
  }
}

double heuristic_table::operator()(node_idx_t const n) const { return h_[n]; }

std::int64_t itinerary::total_cost_cents() const {
  return std::llround(total_cost_ * 100.0);
}

label initial_label(map_graph const& g, plan_request const& req,
                    heuristic_table const& h) {
  auto const names = dataset_names(req);
  auto scores = std::vector<double>{};
  for (auto const& o : req.overlays_) {
    scores.push_back(o.scores_[req.from_]);
  }

  auto l = label{};
  l.node_ = req.from_;
  l.vars_ = pcf::initial_vars(names, scores);
  auto const snap = pcf::to_snapshot(l.vars_, std::nullopt);
  auto const constraint = ltl::canonicalize(req.constraint_);
  l.residual_ = ltl::progress(constraint, snap, false).residual_;
  l.accepts_ = req.from_ == req.to_ &&
               ltl::progress(constraint, snap, true).verdict_ == ltl::verdict::kTrue;
  l.g_ = pcf::pcf(l.vars_, req.profile_);
  l.h_ = h(l.node_);
  (void)g;
  return l;
}

std::vector<label> expand(label const& l, std::uint32_t const self,
                          map_graph const& g, plan_request const& req,
                          planner_options const& opt,
                          heuristic_table const& h) {
  auto succ = std::vector<label>{};
  if (l.residual_.is_false()) {
    return succ;
  }

  auto const now = req.depart_s_ + l.clock_s();
  auto scores = std::vector<double>(req.overlays_.size());
  auto const& edges = g.out_edges(l.node_);
  for (auto i = 0U; i != edges.size(); ++i) {
    auto const& e = edges[i];
    if (!req.allowed_modes_.contains(e.mode_)) {
      continue;
    }

    auto wait = std::int64_t{0};
    auto duration = std::int64_t{0};
    auto fare = std::int64_t{0};
    auto ride = std::optional<geodata::schedule_ref>{};
    if (auto const* s = std::get_if<geodata::schedule_ref>(&e.traversal_)) {
      auto const& line = g.lines_[s->line_];
      auto const trip = geodata::next_trip(line, s->stop_index_, now);
      if (!trip.has_value()) {
        continue;
      }
      wait = line.departure_at(*trip, s->stop_index_) - now;
      duration = line.leg_durations_s_[s->stop_index_];
      auto const stays_aboard = wait == 0 && l.ride_.has_value() &&
                                l.ride_->line_ == s->line_ &&
                                l.ride_->stop_index_ == s->stop_index_;
      fare = stays_aboard ? 0 : line.boarding_fare_cents_;
      ride = geodata::schedule_ref{s->line_, s->stop_index_ + 1U};
    } else {
      duration = std::get<geodata::fixed_duration>(e.traversal_).seconds_;
      fare = pcf::distance_fare_cents(opt.fares_, e.mode_, e.length_m_);
      if (e.mode_ == mode::kTaxi && l.arrival_mode_ != mode::kTaxi) {
        fare += opt.fares_.taxi_base_cents_;
      }
    }
    if (now + wait + duration > kServiceDayS) {
      continue;
    }

    for (auto k = 0U; k != req.overlays_.size(); ++k) {
      scores[k] = req.overlays_[k].scores_[e.to_];
    }
    auto vars = pcf::accumulate(
        l.vars_, pcf::step{e.mode_, duration, wait, fare, scores},
        opt.attribute_wait_);
    auto const snap = pcf::to_snapshot(vars, e.mode_);
    auto nonfinal = ltl::progress(l.residual_, snap, false);
    auto const accepts =
        ltl::progress(l.residual_, snap, true).verdict_ == ltl::verdict::kTrue;
    auto const steps = l.steps_ + 1U;
    auto const can_finish = e.to_ == req.to_ && accepts;
    if ((nonfinal.verdict_ == ltl::verdict::kFalse || steps >= opt.max_steps_) &&
        !can_finish) {
      continue;
    }

    auto& s = succ.emplace_back();
    s.node_ = e.to_;
    s.arrival_mode_ = e.mode_;
    s.ride_ = ride;
    s.vars_ = std::move(vars);
    s.residual_ = std::move(nonfinal.residual_);
    s.accepts_ = accepts;
    s.g_ = pcf::pcf(s.vars_, req.profile_);
    s.h_ = h(e.to_);
    s.steps_ = steps;
    s.parent_ = self;
    s.edge_ = static_cast<std::uint32_t>(&e - g.edges_.data());
    s.wait_s_ = wait;
    s.fare_cents_ = fare;
  }
  return succ;
}

plan_result plan(map_graph const& g, plan_request const& req,
                 planner_options const& opt) {
  if (req.from_ >= g.node_count() || req.to_ >= g.node_count()) {
    throw error{error_code::kUnknownEndpoint, "endpoint out of range"};
  }
  if (req.from_ == req.to_) {
    throw error{error_code::kInvalidRequest,
                "origin and destination are the same node"};
  }
  if (req.depart_s_ < 0 || req.depart_s_ >= kServiceDayS) {
    throw error{error_code::kInvalidRequest,
                fmt::format("departure {} outside the service day",
                            req.depart_s_)};
  }
  for (auto const& o : req.overlays_) {
    if (o.scores_.size() != g.node_count()) {
      throw std::invalid_argument{
          fmt::format("overlay {} built against another graph", o.name_)};
    }
  }

  auto canonical = req;
  canonical.constraint_ = ltl::canonicalize(req.constraint_);

  auto const h = heuristic_table{g, req.profile_, req.allowed_modes_, req.to_};
  auto const refs = referenced_vars{canonical.constraint_, req.overlays_};
  auto const dominates = dominance{
      refs, opt.attribute_wait_ ? req.profile_.beta_time_ *
                                      req.profile_.alpha_[idx(mode::kPublic)] /
                                      3600.0
                                : 0.0};

  auto const worse = [&](queue_entry const& a, queue_entry const& b) {
    if (a.f_ != b.f_) {
      return a.f_ > b.f_;
    }
    if (a.g_ != b.g_) {
      return a.g_ < b.g_;
    }
    if (a.node_ != b.node_) {
      return g.nodes_[a.node_].id_ > g.nodes_[b.node_].id_;
    }
    if (a.arrival_mode_ != b.arrival_mode_) {
      return a.arrival_mode_ > b.arrival_mode_;
    }
    return a.seq_ > b.seq_;
  };

  auto result = plan_result{};
  auto labels = std::vector<label>{};
  auto dead = std::vector<bool>{};
  auto at_node = std::vector<std::vector<std::uint32_t>>(g.node_count());
  auto open = std::priority_queue<queue_entry, std::vector<queue_entry>,
                                  decltype(worse)>{worse};
  auto seq = std::uint64_t{0U};

  auto const push = [&](label&& l) {
    auto& bucket = at_node[l.node_];
    for (auto const other : bucket) {
      if (dominates(labels[other], l)) {
        ++result.stats_.dominated_;
        return;
      }
    }
    std::erase_if(bucket, [&](std::uint32_t const other) {
      if (dominates(l, labels[other])) {
        dead[other] = true;
        ++result.stats_.dominated_;
        return true;
      }
      return false;
    });
    auto const i = static_cast<std::uint32_t>(labels.size());
    bucket.push_back(i);
    open.push({l.g_ + l.h_, l.g_, l.node_,
               l.arrival_mode_.has_value() ? static_cast<int>(*l.arrival_mode_)
                                           : -1,
               seq++, i});
    labels.push_back(std::move(l));
    dead.push_back(false);
    ++result.stats_.generated_;
  };

  auto root = initial_label(g, canonical, h);
  if (root.residual_.is_false()) {
    return result;
  }
  push(std::move(root));

  while (!open.empty()) {
    auto const top = open.top();
    open.pop();
    if (dead[top.label_]) {
      continue;
    }
    auto const& l = labels[top.label_];
    if (opt.on_expand_) {
      opt.on_expand_(l);
    }
    if (l.node_ == req.to_ && l.accepts_) {
      result.itinerary_ = extract_itinerary(labels, top.label_, g, req);
      return result;
    }
    ++result.stats_.expanded_;
    for (auto& s : expand(l, top.label_, g, canonical, opt, h)) {
      push(std::move(s));
    }
  }
  return result;
}

itinerary extract_itinerary(std::span<label const> labels,
                            std::uint32_t const goal, map_graph const& g,
                            plan_request const& req) {
  auto chain = std::vector<std::uint32_t>{};
  for (auto i = goal; i != kNoLabel; i = labels[i].parent_) {
    chain.push_back(i);
  }
  std::reverse(begin(chain), end(chain));

  auto it = itinerary{};
  it.depart_s_ = req.depart_s_;
  it.constraint_ = req.constraint_;
  it.totals_ = labels[goal].vars_;
  it.total_cost_ = pcf::pcf(it.totals_, req.profile_);

  auto time = std::array<std::int64_t, geodata::kNumModes>{};
  auto fares = std::array<std::int64_t, geodata::kNumModes>{};
  it.trajectory_.push_back(pcf::to_snapshot(labels[chain.front()].vars_,
                                            std::nullopt));
  for (auto k = 1U; k < chain.size(); ++k) {
    auto const& prev = labels[chain[k - 1U]];
    auto const& l = labels[chain[k]];
    auto const& e = g.edges_[l.edge_];
    it.trajectory_.push_back(pcf::to_snapshot(l.vars_, l.arrival_mode_));

    auto& s = it.steps_.emplace_back();
    s.edge_ = l.edge_;
    s.from_ = e.from_;
    s.to_ = e.to_;
    s.mode_ = e.mode_;
    if (auto const* r = std::get_if<geodata::schedule_ref>(&e.traversal_)) {
      s.line_ = r->line_;
    }
    s.start_s_ = req.depart_s_ + prev.clock_s() + l.wait_s_;
    s.end_s_ = req.depart_s_ + l.clock_s();
    s.wait_s_ = l.wait_s_;
    s.fare_cents_ = l.fare_cents_;
    s.length_m_ = e.length_m_;

    time[idx(s.mode_)] += (l.vars_.time_s_[idx(s.mode_)] -
                           prev.vars_.time_s_[idx(s.mode_)]);
    fares[idx(s.mode_)] += s.fare_cents_;

    if (it.legs_.empty() || it.legs_.back().mode_ != s.mode_) {
      auto& leg = it.legs_.emplace_back();
      leg.mode_ = s.mode_;
      leg.nodes_.push_back(s.from_);
      leg.start_s_ = s.start_s_ - s.wait_s_;
    }
    auto& leg = it.legs_.back();
    leg.nodes_.push_back(s.to_);
    if (s.line_.has_value() &&
        (leg.lines_.empty() || leg.lines_.back() != *s.line_)) {
      leg.lines_.push_back(*s.line_);
    }
    leg.end_s_ = s.end_s_;
    leg.wait_s_ += s.wait_s_;
    leg.fare_cents_ += s.fare_cents_;
    leg.length_m_ += s.length_m_;
  }

  if (time != it.totals_.time_s_ || fares != it.totals_.fare_cents_) {
    throw std::logic_error{"itinerary legs do not add up to the goal state"};
  }
  return it;
}

node_idx_t resolve_endpoint(map_graph const& g, endpoint const& ep) {
  if (auto const* id = std::get_if<std::string>(&ep)) {
    auto const n = g.find(*id);
    if (!n.has_value()) {
      throw error{error_code::kUnknownEndpoint,
                  fmt::format("unknown node \"{}\"", *id)};
    }
    return *n;
  }
  auto const& pos = std::get<geodata::latlon>(ep);
  if (!geodata::is_valid(pos)) {
    throw error{error_code::kUnknownEndpoint,
                fmt::format("invalid coordinates {},{}", pos.lat_, pos.lon_)};
  }
  auto best = std::optional<node_idx_t>{};
  auto best_d = kSnapRadiusM;
  for (auto n = node_idx_t{0U}; n != g.node_count(); ++n) {
    auto const d = great_circle_distance(pos, g.nodes_[n].pos_);
    if (d < best_d || (d == best_d && !best.has_value())) {
      best = n;
      best_d = d;
    }
  }
  if (!best.has_value()) {
    throw error{error_code::kUnknownEndpoint,
                fmt::format("no node within {} m of {},{}", kSnapRadiusM,
                            pos.lat_, pos.lon_)};
  }
  return *best;
}

}  // namespace tripplan::search
