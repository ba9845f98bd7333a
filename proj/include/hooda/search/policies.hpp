#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "hooda/loop.hpp"
#include "hooda/search/lanes.hpp"
#include "hooda/situation_map.hpp"
#include "hooda/world.hpp"

namespace hooda::bench {

using ooda::Action;
using ooda::Directive;
using ooda::LoopInput;
using ooda::LoopPolicy;
using ooda::LoopState;
using ooda::ObservationMsg;
using ooda::Report;
using ooda::StepOutput;

// Knobs shared by the three search architectures.
struct SearchParams {
  double belief_cell = 2.0;      // belief map resolution, meters
  double regen_time = 60.0;      // seconds for a searched cell to regain probability mass
  double window = 25.0;          // uncoordinated replan search radius
  double lane_overlap = 0.9;     // lane width = 2 * sensing_radius * overlap
  double reach_factor = 1.5;     // waypoint reached within factor * speed * tick
  double fresh_floor = 0.08;     // below this staleness score, jump somewhere new
  int n_edges = 3;
  double terminal_tick = 0.5;
  double edge_tick = 2.5;
  double cloud_tick = 12.5;
  int terminal_depth = 1;
  int edge_depth = 2;
  int cloud_depth = 2;
  double terminal_edge_latency = 0.05;
  double edge_cloud_latency = 0.2;
  double terminal_edge_bandwidth = 1000.0;
  double edge_cloud_bandwidth = 2000.0;
  double loss_prob = 0.0;
  double staleness_lambda = 0.99;
};

inline void validate(const SearchParams& p) {
  if (p.belief_cell <= 0.0) throw ValidationError("search: belief_cell must be > 0");
  if (p.regen_time <= 0.0) throw ValidationError("search: regen_time must be > 0");
  if (p.window <= 0.0) throw ValidationError("search: window must be > 0");
  if (p.lane_overlap <= 0.0 || p.lane_overlap > 1.0)
    throw ValidationError("search: lane_overlap must be in (0, 1]");
  if (p.n_edges < 1) throw ValidationError("search: n_edges must be >= 1");
  if (!(p.terminal_tick > 0.0) || p.terminal_tick > p.edge_tick || p.edge_tick > p.cloud_tick)
    throw ValidationError("search: ticks must satisfy terminal <= edge <= cloud");
  if (p.terminal_depth < 1 || p.edge_depth < 1 || p.cloud_depth < 1)
    throw ValidationError("search: depths must be >= 1");
  if (p.loss_prob < 0.0 || p.loss_prob > 1.0)
    throw ValidationError("search: loss_prob must be in [0, 1]");
}

// ---------------------------------------------------------------------------
// Terminal loop: one per UAV.

struct TerminalDecision {
  Vec2 position{};  // last reported own position
  bool position_known = false;

  Vec2 waypoint{};
  bool has_waypoint = false;

  // lawnmower assignment (coordinated architectures)
  bool has_assignment = false;
  Rect assigned_region{};
  double lane_width = 0.0;
  std::vector<int> lanes;
  std::size_t cursor = 0;  // next lane position in `lanes`
  int leg = 0;             // 0: to lane entry, 1: sweeping to the far end
  bool exit_high = true;   // sweep direction of the current lane

  double last_report_time = -1.0;
};

// Belief cells store: value = remaining probability mass (regrown lazily),
// confidence = searched recently, timestamp = last sweep time.
class TerminalSearchPolicy : public LoopPolicy<TerminalDecision> {
public:
  TerminalSearchPolicy(const sim::WorldConfig& world, const SearchParams& params,
                       bool coordinated)
      : world_(world), params_(params), coordinated_(coordinated) {}

  static net::SituationMap initial_belief(const sim::WorldConfig& world,
                                          const SearchParams& params) {
    Rect extent{{0, 0}, {world.extent_x, world.extent_y}};
    net::SituationMap m(net::Granularity::Local, extent, params.belief_cell);
    const double prior = m.size() > 0 ? 1.0 / m.size() : 0.0;
    for (auto& c : m.cells()) c.value = prior;
    return m;
  }

  void observe(LoopState<TerminalDecision>& st, std::span<const LoopInput> inputs) override {
    for (const auto& in : inputs) {
      const auto* obs = std::get_if<ObservationMsg>(&in.body);
      if (!obs) continue;
      st.last_decision.position = obs->position;
      st.last_decision.position_known = true;
      mark_searched(st.belief, obs->position, obs->sensing_radius, obs->time);
    }
  }

  void orient(LoopState<TerminalDecision>& st) override {
    for (const auto& dir : st.pending_directives) apply_assignment(st, dir);
  }

  TerminalDecision propose(const LoopState<TerminalDecision>& st, const TerminalDecision& inc,
                           Rng& rng) override {
    TerminalDecision d = inc;
    if (!d.position_known) return d;
    if (coordinated_ && d.has_assignment && d.cursor < d.lanes.size()) {
      advance_lawnmower(st, d);
      if (d.has_assignment) return d;  // got a sweep waypoint; else fall back
    }
    // uncoordinated / fallback: least-recently-searched cell nearby
    auto pick = best_stale_cell(st, d.position);
    if (pick) {
      d.waypoint = *pick;
      d.has_waypoint = true;
    } else {
      d.waypoint = {rng.uniform(0.0, world_.extent_x), rng.uniform(0.0, world_.extent_y)};
      d.has_waypoint = true;
    }
    return d;
  }

  double evaluate(const LoopState<TerminalDecision>& st, const TerminalDecision& d) override {
    if (!d.has_waypoint) return -1e18;
    if (reached(d, d.waypoint)) return -1e17;  // spent waypoint, any fresh one wins
    if (coordinated_ && d.has_assignment && d.cursor < d.lanes.size())
      return 1.0;  // procedural sweep waypoints are always worth taking
    return staleness_score(st, d.waypoint) - 0.3 * distance(d.position, d.waypoint) / params_.window;
  }

  StepOutput act(LoopState<TerminalDecision>& st) override {
    StepOutput out;
    auto& d = st.last_decision;
    if (d.has_waypoint) {
      Action a;
      a.actor = st.config.loop_id;
      a.kind = "set_waypoint";
      a.point = d.waypoint;
      out.actions.push_back(a);
    }
    if (st.parent) {
      Report r;
      r.to_loop = *st.parent;
      r.map_fragment = st.belief.fragment_since(d.last_report_time);
      const double remaining =
          d.has_assignment ? static_cast<double>(d.lanes.size() - std::min(d.cursor, d.lanes.size()))
                           : 0.0;
      r.metrics = {remaining, d.position.x, d.position.y, d.has_assignment ? 1.0 : 0.0};
      out.reports.push_back(std::move(r));
      d.last_report_time = st.clock;
    }
    return out;
  }

  bool reached(const TerminalDecision& d, Vec2 p) const {
    return distance(d.position, p) <= params_.reach_factor * world_.uav_speed * world_.tick;
  }

private:
  void mark_searched(net::SituationMap& belief, Vec2 pos, double radius, double t) const {
    const GridFrame& f = belief.frame();
    if (f.size() == 0) return;
    const double r = std::max(radius, f.cell_size * 0.5);
    const double r2 = r * r;
    const int row0 = std::max(0, static_cast<int>((pos.y - r - f.region.lo.y) / f.cell_size));
    const int row1 = std::min(f.rows - 1, static_cast<int>((pos.y + r - f.region.lo.y) / f.cell_size));
    const int col0 = std::max(0, static_cast<int>((pos.x - r - f.region.lo.x) / f.cell_size));
    const int col1 = std::min(f.cols - 1, static_cast<int>((pos.x + r - f.region.lo.x) / f.cell_size));
    for (int row = row0; row <= row1; ++row)
      for (int col = col0; col <= col1; ++col) {
        const int idx = f.index(row, col);
        if (distance_sq(f.center(idx), pos) > r2) continue;
        auto& cell = belief.at(idx);
        cell.value = 0.0;
        cell.confidence = 1.0;
        cell.timestamp = t;
      }
  }

  void apply_assignment(LoopState<TerminalDecision>& st, const Directive& dir) {
    auto& d = st.last_decision;
    if (!dir.payload.region) return;
    d.assigned_region = *dir.payload.region;
    auto it = dir.payload.params.find("lane_width");
    d.lane_width = it != dir.payload.params.end() ? it->second : 2.0 * world_.sensing_radius;
    d.lanes = dir.payload.ids;
    d.has_assignment = !d.lanes.empty();
    d.cursor = 0;
    d.leg = 0;
    d.has_waypoint = false;
    if (d.has_assignment && d.position_known) {
      // start from the nearest assigned lane
      std::sort(d.lanes.begin(), d.lanes.end());
      double best = std::numeric_limits<double>::max();
      std::size_t best_at = 0;
      for (std::size_t i = 0; i < d.lanes.size(); ++i) {
        const double dx = std::abs(lane_center_x(d, d.lanes[i]) - d.position.x);
        if (dx < best) {
          best = dx;
          best_at = i;
        }
      }
      if (best_at > 0 && best_at + 1 == d.lanes.size())
        std::reverse(d.lanes.begin(), d.lanes.end());
    }
  }

  double lane_center_x(const TerminalDecision& d, int lane) const {
    return d.assigned_region.lo.x + (lane + 0.5) * d.lane_width;
  }

  // A lane counts as already searched when most of its cells are fresh in the
  // loop's own belief; re-assigned blocks can contain lanes the UAV has done.
  bool lane_fresh(const LoopState<TerminalDecision>& st, const TerminalDecision& d,
                  int lane) const {
    const Rect r{{d.assigned_region.lo.x + lane * d.lane_width, d.assigned_region.lo.y},
                 {d.assigned_region.lo.x + (lane + 1) * d.lane_width, d.assigned_region.hi.y}};
    const GridFrame& f = st.belief.frame();
    int total = 0, fresh = 0;
    for (int i = 0; i < f.size(); ++i) {
      if (!r.contains(f.center(i))) continue;
      ++total;
      const auto& cell = st.belief.at(i);
      if (cell.confidence > 0.0 && st.clock - cell.timestamp < params_.regen_time) ++fresh;
    }
    return total > 0 && fresh >= static_cast<int>(0.85 * total);
  }

  void advance_lawnmower(const LoopState<TerminalDecision>& st, TerminalDecision& d) const {
    const double margin = std::min(world_.sensing_radius, d.assigned_region.height() * 0.25);
    while (d.cursor < d.lanes.size()) {
      const int lane = d.lanes[d.cursor];
      if (d.leg == 0 && lane_fresh(st, d, lane)) {
        ++d.cursor;
        continue;
      }
      const double cx = lane_center_x(d, lane);
      const Vec2 low{cx, d.assigned_region.lo.y + margin};
      const Vec2 high{cx, d.assigned_region.hi.y - margin};
      if (d.leg == 0) {
        const bool enter_low = distance(d.position, low) <= distance(d.position, high);
        const Vec2 entry = enter_low ? low : high;
        if (!reached(d, entry)) {
          d.waypoint = entry;
          d.has_waypoint = true;
          return;
        }
        d.leg = 1;
        d.exit_high = enter_low;
      }
      const Vec2 exit = d.exit_high ? high : low;
      if (!reached(d, exit)) {
        d.waypoint = exit;
        d.has_waypoint = true;
        return;
      }
      ++d.cursor;  // lane finished
      d.leg = 0;
    }
    d.has_assignment = false;  // block exhausted; fall back until re-tasked
  }

  double staleness_score(const LoopState<TerminalDecision>& st, Vec2 p) const {
    auto idx = st.belief.cell_containing(p);
    if (!idx) return 0.0;
    const auto& cell = st.belief.at(*idx);
    if (cell.confidence <= 0.0) return 1.0;  // never searched
    const double age = std::max(0.0, st.clock - cell.timestamp);
    return std::min(age / params_.regen_time, 1.0);
  }

  std::optional<Vec2> best_stale_cell(const LoopState<TerminalDecision>& st, Vec2 pos) const {
    const GridFrame& f = st.belief.frame();
    if (f.size() == 0) return std::nullopt;
    const double w = params_.window;
    const int row0 = std::max(0, static_cast<int>((pos.y - w - f.region.lo.y) / f.cell_size));
    const int row1 = std::min(f.rows - 1, static_cast<int>((pos.y + w - f.region.lo.y) / f.cell_size));
    const int col0 = std::max(0, static_cast<int>((pos.x - w - f.region.lo.x) / f.cell_size));
    const int col1 = std::min(f.cols - 1, static_cast<int>((pos.x + w - f.region.lo.x) / f.cell_size));
    double best = -1e18;
    std::optional<Vec2> pick;
    for (int row = row0; row <= row1; ++row)
      for (int col = col0; col <= col1; ++col) {
        const int idx = f.index(row, col);
        const Vec2 c = f.center(idx);
        const double dist = distance(c, pos);
        if (dist > w) continue;
        const auto& cell = st.belief.at(idx);
        double stale = 1.0;
        if (cell.confidence > 0.0) {
          const double age = std::max(0.0, st.clock - cell.timestamp);
          stale = std::min(age / params_.regen_time, 1.0);
        }
        const double score = stale - 0.3 * dist / w;
        if (score > best) {
          best = score;
          pick = c;
        }
      }
    if (best < params_.fresh_floor) return std::nullopt;  // everything nearby is fresh
    return pick;
  }

  sim::WorldConfig world_;
  SearchParams params_;
  bool coordinated_;
};

// ---------------------------------------------------------------------------
// Edge loop: partitions its strip into lanes, deals contiguous blocks to its
// members, and steals work from loaded members for idle ones.

struct EdgeDecision {
  Rect region{};
  LaneGrid lanes{};
  std::vector<int> members;
  std::map<int, std::vector<int>> plan;       // member -> assigned lanes
  std::map<int, std::vector<int>> last_sent;  // directive dedupe
  std::map<int, Vec2> member_pos;
  std::map<int, double> member_remaining;  // self-reported lanes left
  std::vector<bool> lane_done;
  bool plan_dirty = true;
  double last_report_time = -1.0;
};

class EdgeSearchPolicy : public LoopPolicy<EdgeDecision> {
public:
  EdgeSearchPolicy(const sim::WorldConfig& world, const SearchParams& params)
      : world_(world), params_(params) {}

  static net::SituationMap initial_belief(const Rect& region, const sim::WorldConfig& world,
                                          const SearchParams& params) {
    net::SituationMap m(net::Granularity::Regional, region, params.belief_cell);
    Rect extent{{0, 0}, {world.extent_x, world.extent_y}};
    const int global_cells =
        GridFrame(extent, params.belief_cell).size();
    const double prior = global_cells > 0 ? 1.0 / global_cells : 0.0;
    for (auto& c : m.cells()) c.value = prior;
    return m;
  }

  void observe(LoopState<EdgeDecision>& st, std::span<const LoopInput> inputs) override {
    auto& d = st.last_decision;
    for (const auto& in : inputs) {
      const auto* rep = std::get_if<Report>(&in.body);
      if (!rep) continue;
      if (!rep->map_fragment.empty()) st.belief.ingest(rep->map_fragment);
      if (rep->metrics.size() >= 3) {
        d.member_remaining[rep->from_loop] = rep->metrics[0];
        d.member_pos[rep->from_loop] = {rep->metrics[1], rep->metrics[2]};
      }
    }
  }

  void orient(LoopState<EdgeDecision>& st) override {
    auto& d = st.last_decision;
    for (const auto& dir : st.pending_directives) {
      if (dir.payload.ids != d.members) {
        const std::vector<int> old_members = d.members;
        d.members = dir.payload.ids;
        apply_membership_change(d, old_members);
      }
    }
    refresh_lane_done(st);
    if (d.plan_dirty) rebuild_plan(d);
  }

  EdgeDecision propose(const LoopState<EdgeDecision>&, const EdgeDecision& inc, Rng&) override {
    // Work stealing: hand half of the most loaded member's remaining lanes to
    // the least loaded one. Acceptance is up to the makespan evaluation.
    EdgeDecision d = inc;
    if (d.members.size() < 2) return d;
    int donor = -1, thief = -1;
    double max_load = -1.0, min_load = std::numeric_limits<double>::max();
    for (int m : d.members) {
      const double load = remaining_lanes(d, m);
      if (load > max_load) {
        max_load = load;
        donor = m;
      }
      if (load < min_load) {
        min_load = load;
        thief = m;
      }
    }
    if (donor < 0 || thief < 0 || donor == thief) return d;
    auto& from = d.plan[donor];
    std::vector<int> live;
    for (int lane : from)
      if (!lane_is_done(d, lane)) live.push_back(lane);
    if (live.size() < 2 || min_load > 0.0) return d;
    const std::size_t take = live.size() / 2;
    std::vector<int> moved(live.end() - static_cast<long>(take), live.end());
    from.erase(std::remove_if(from.begin(), from.end(),
                              [&](int lane) {
                                return std::find(moved.begin(), moved.end(), lane) != moved.end();
                              }),
               from.end());
    auto& to = d.plan[thief];
    to.insert(to.end(), moved.begin(), moved.end());
    return d;
  }

  double evaluate(const LoopState<EdgeDecision>&, const EdgeDecision& d) override {
    // negative makespan estimate: worst member sweep time
    double worst = 0.0;
    for (int m : d.members) {
      double lanes_left = 0.0;
      auto it = d.plan.find(m);
      if (it != d.plan.end())
        for (int lane : it->second)
          if (!lane_is_done(d, lane)) lanes_left += 1.0;
      const double sweep = lanes_left * d.region.height() /
                           std::max(world_.uav_speed, 0.1);
      worst = std::max(worst, sweep);
    }
    return -worst;
  }

  StepOutput act(LoopState<EdgeDecision>& st) override {
    StepOutput out;
    auto& d = st.last_decision;
    for (int m : d.members) {
      auto it = d.plan.find(m);
      std::vector<int> lanes = it != d.plan.end() ? it->second : std::vector<int>{};
      // a member that finished its block gets it again once the lanes go
      // stale; otherwise only plan changes are (re)sent
      auto rep = d.member_remaining.find(m);
      const bool idle_with_work =
          rep != d.member_remaining.end() && rep->second <= 0.0 && remaining_lanes(d, m) > 0.0;
      auto sent = d.last_sent.find(m);
      if (!idle_with_work && sent != d.last_sent.end() && sent->second == lanes) continue;
      Directive dir;
      dir.to_loop = m;
      dir.payload.region = d.region;
      dir.payload.params["lane_width"] = d.lanes.lane_width;
      dir.payload.ids = lanes;
      out.directives.push_back(std::move(dir));
      d.last_sent[m] = lanes;
    }
    if (st.parent) {
      Report r;
      r.to_loop = *st.parent;
      r.map_fragment = st.belief;  // regional snapshot for global fusion
      double remaining = 0.0;
      for (std::size_t lane = 0; lane < d.lane_done.size(); ++lane)
        if (!d.lane_done[lane]) remaining += 1.0;
      // [remaining, member count, then (id, x, y) per member with a known fix]
      r.metrics = {remaining, static_cast<double>(d.members.size())};
      for (int m : d.members) {
        auto pos = d.member_pos.find(m);
        if (pos == d.member_pos.end()) continue;
        r.metrics.push_back(static_cast<double>(m));
        r.metrics.push_back(pos->second.x);
        r.metrics.push_back(pos->second.y);
      }
      out.reports.push_back(std::move(r));
      d.last_report_time = st.clock;
    }
    return out;
  }

private:
  bool lane_is_done(const EdgeDecision& d, int lane) const {
    return lane >= 0 && static_cast<std::size_t>(lane) < d.lane_done.size() &&
           d.lane_done[static_cast<std::size_t>(lane)];
  }

  double remaining_lanes(const EdgeDecision& d, int member) const {
    auto it = d.plan.find(member);
    if (it == d.plan.end()) return 0.0;
    double n = 0.0;
    for (int lane : it->second)
      if (!lane_is_done(d, lane)) n += 1.0;
    return n;
  }

  // A lane counts as done when most of its cells were searched recently.
  void refresh_lane_done(LoopState<EdgeDecision>& st) {
    auto& d = st.last_decision;
    d.lane_done.assign(static_cast<std::size_t>(d.lanes.count), false);
    for (int lane = 0; lane < d.lanes.count; ++lane) {
      const Rect r = d.lanes.lane_rect(lane);
      int total = 0, searched = 0;
      const GridFrame& f = st.belief.frame();
      for (int i = 0; i < f.size(); ++i) {
        if (!r.contains(f.center(i))) continue;
        ++total;
        const auto& cell = st.belief.at(i);
        if (cell.confidence > 0.0 &&
            st.clock - cell.timestamp < params_.regen_time)
          ++searched;
      }
      if (total > 0 && searched >= static_cast<int>(0.85 * total))
        d.lane_done[static_cast<std::size_t>(lane)] = true;
    }
  }

  void rebuild_plan(EdgeDecision& d) {
    d.plan.clear();
    std::vector<int> live;
    for (int lane = 0; lane < d.lanes.count; ++lane)
      if (!lane_is_done(d, lane)) live.push_back(lane);
    std::vector<int> members = d.members;
    std::sort(members.begin(), members.end());
    auto blocks = deal_lane_blocks(live, members.size());
    for (std::size_t i = 0; i < members.size(); ++i) d.plan[members[i]] = blocks[i];
    d.plan_dirty = false;
  }

  // Keeps unaffected members sweeping: a departing member's live lanes go to
  // the least loaded survivor, a newcomer steals half of the most loaded
  // member's block.
  void apply_membership_change(EdgeDecision& d, const std::vector<int>& old_members) {
    for (int r : old_members) {
      if (std::find(d.members.begin(), d.members.end(), r) != d.members.end()) continue;
      std::vector<int> live;
      auto it = d.plan.find(r);
      if (it != d.plan.end())
        for (int lane : it->second)
          if (!lane_is_done(d, lane)) live.push_back(lane);
      d.plan.erase(r);
      d.last_sent.erase(r);
      d.member_remaining.erase(r);
      if (!live.empty() && !d.members.empty()) {
        int heir = d.members.front();
        double lightest = std::numeric_limits<double>::max();
        for (int m : d.members) {
          const double load = remaining_lanes(d, m);
          if (load < lightest) {
            lightest = load;
            heir = m;
          }
        }
        auto& lanes = d.plan[heir];
        lanes.insert(lanes.end(), live.begin(), live.end());
      }
    }
    for (int a : d.members) {
      if (std::find(old_members.begin(), old_members.end(), a) != old_members.end()) continue;
      d.plan[a];  // newcomer starts empty
      int donor = -1;
      double heaviest = 1.0;  // require at least two live lanes to split
      for (int m : d.members) {
        if (m == a) continue;
        const double load = remaining_lanes(d, m);
        if (load > heaviest) {
          heaviest = load;
          donor = m;
        }
      }
      if (donor < 0) continue;
      auto& from = d.plan[donor];
      std::vector<int> live;
      for (int lane : from)
        if (!lane_is_done(d, lane)) live.push_back(lane);
      const std::size_t take = live.size() / 2;
      std::vector<int> moved(live.end() - static_cast<long>(take), live.end());
      from.erase(std::remove_if(from.begin(), from.end(),
                                [&](int lane) {
                                  return std::find(moved.begin(), moved.end(), lane) !=
                                         moved.end();
                                }),
                 from.end());
      d.plan[a] = std::move(moved);
    }
  }

  sim::WorldConfig world_;
  SearchParams params_;
};

// ---------------------------------------------------------------------------
// Cloud loop: fuses regional snapshots into the global belief and rebalances
// UAV counts across edges toward the remaining probability mass.

struct CloudDecision {
  std::map<int, Rect> edge_regions;
  std::map<int, net::SituationMap> regional;  // latest snapshot per edge
  std::map<int, double> snapshot_time;
  std::map<int, std::vector<int>> rosters;
  std::map<int, std::vector<int>> last_sent;
  std::map<int, Vec2> uav_pos;  // last reported fixes, relayed by edges
};

class CloudSearchPolicy : public LoopPolicy<CloudDecision> {
public:
  CloudSearchPolicy(const sim::WorldConfig& world, const SearchParams& params)
      : world_(world), params_(params) {}

  static net::SituationMap initial_belief(const sim::WorldConfig& world,
                                          const SearchParams& params) {
    Rect extent{{0, 0}, {world.extent_x, world.extent_y}};
    net::SituationMap m(net::Granularity::Global, extent, params.belief_cell);
    const double prior = m.size() > 0 ? 1.0 / m.size() : 0.0;
    for (auto& c : m.cells()) c.value = prior;
    return m;
  }

  void observe(LoopState<CloudDecision>& st, std::span<const LoopInput> inputs) override {
    auto& d = st.last_decision;
    for (const auto& in : inputs) {
      const auto* rep = std::get_if<Report>(&in.body);
      if (!rep) continue;
      for (std::size_t k = 2; k + 2 < rep->metrics.size(); k += 3)
        d.uav_pos[static_cast<int>(rep->metrics[k])] = {rep->metrics[k + 1],
                                                        rep->metrics[k + 2]};
      if (rep->map_fragment.empty()) continue;
      auto it = d.snapshot_time.find(rep->from_loop);
      if (it != d.snapshot_time.end() && it->second > in.time) continue;
      d.regional[rep->from_loop] = rep->map_fragment;
      d.snapshot_time[rep->from_loop] = in.time;
    }
  }

  void orient(LoopState<CloudDecision>& st) override {
    auto& d = st.last_decision;
    if (d.regional.empty()) return;
    std::vector<net::SituationMap> snaps;
    snaps.reserve(d.regional.size());
    for (const auto& [edge, snap] : d.regional) snaps.push_back(snap);
    net::FuseOptions opt;
    opt.prior = &st.belief;
    opt.staleness_lambda = params_.staleness_lambda;
    opt.now = st.clock;
    Rect extent{{0, 0}, {world_.extent_x, world_.extent_y}};
    st.belief = net::fuse_global(snaps, extent, params_.belief_cell, opt);
  }

  CloudDecision propose(const LoopState<CloudDecision>& st, const CloudDecision& inc,
                        Rng&) override {
    // One transfer from the lowest per-capita-load edge to the highest.
    CloudDecision d = inc;
    if (d.rosters.size() < 2) return d;
    int donor = -1, needy = -1;
    double lo = std::numeric_limits<double>::max(), hi = -1.0;
    for (const auto& [edge, roster] : d.rosters) {
      const double load = per_capita_load(st, d, edge);
      if (load < lo && !roster.empty()) {
        lo = load;
        donor = edge;
      }
      if (load > hi) {
        hi = load;
        needy = edge;
      }
    }
    if (donor < 0 || needy < 0 || donor == needy) return d;
    auto& from = d.rosters[donor];
    if (from.empty()) return d;
    // transfer the donor member closest to the needy region
    const Vec2 goal = d.edge_regions.at(needy).center();
    int moved = *std::max_element(from.begin(), from.end());
    double best = std::numeric_limits<double>::max();
    for (int uav : from) {
      auto pos = d.uav_pos.find(uav);
      if (pos == d.uav_pos.end()) continue;
      const double dist = distance(pos->second, goal);
      if (dist < best) {
        best = dist;
        moved = uav;
      }
    }
    from.erase(std::remove(from.begin(), from.end(), moved), from.end());
    d.rosters[needy].push_back(moved);
    std::sort(d.rosters[needy].begin(), d.rosters[needy].end());
    return d;
  }

  double evaluate(const LoopState<CloudDecision>& st, const CloudDecision& d) override {
    // makespan in seconds: remaining area-equivalent per region over the
    // roster's sweep rate, plus a transit charge per re-homed UAV so marginal
    // moves do not pay
    const double extent_area = world_.extent_x * world_.extent_y;
    const double sweep_rate =
        std::max(2.0 * world_.sensing_radius * world_.uav_speed, 1e-6);
    double worst = 0.0;
    for (const auto& [edge, roster] : d.rosters) {
      const double area = region_mass(st, d.edge_regions.at(edge)) * extent_area;
      const double count = std::max(static_cast<double>(roster.size()), 0.25);
      worst = std::max(worst, area / (sweep_rate * count));
    }
    int moves = 0;
    const auto& current = st.last_decision.rosters;
    for (const auto& [edge, roster] : d.rosters) {
      auto it = current.find(edge);
      if (it == current.end()) continue;
      for (int uav : roster)
        if (std::find(it->second.begin(), it->second.end(), uav) == it->second.end()) ++moves;
    }
    const double transit =
        0.5 * (world_.extent_x / std::max(params_.n_edges, 1)) / std::max(world_.uav_speed, 0.1);
    return -(worst + transit * moves);
  }

  StepOutput act(LoopState<CloudDecision>& st) override {
    StepOutput out;
    auto& d = st.last_decision;
    for (const auto& [edge, roster] : d.rosters) {
      auto sent = d.last_sent.find(edge);
      if (sent != d.last_sent.end() && sent->second == roster) continue;
      Directive dir;
      dir.to_loop = edge;
      dir.payload.region = d.edge_regions.at(edge);
      dir.payload.ids = roster;
      out.directives.push_back(std::move(dir));
      d.last_sent[edge] = roster;
    }
    return out;
  }

private:
  // Remaining probability mass in a region under the regrowth model: searched
  // cells recover their prior share as they age.
  double region_mass(const LoopState<CloudDecision>& st, const Rect& region) const {
    const double prior = st.belief.size() > 0 ? 1.0 / st.belief.size() : 0.0;
    double mass = 0.0;
    for (int i = 0; i < st.belief.size(); ++i) {
      if (!region.contains(st.belief.center(i))) continue;
      const auto& cell = st.belief.at(i);
      if (cell.confidence <= 0.0) {
        mass += prior;
      } else {
        const double age = std::max(0.0, st.clock - cell.timestamp);
        const double regrown = prior * std::min(age / params_.regen_time, 1.0);
        mass += std::max(cell.value, regrown);
      }
    }
    return mass;
  }

  double per_capita_load(const LoopState<CloudDecision>& st, const CloudDecision& d,
                         int edge) const {
    const double mass = region_mass(st, d.edge_regions.at(edge));
    const auto it = d.rosters.find(edge);
    const double count = it != d.rosters.end() ? static_cast<double>(it->second.size()) : 0.0;
    return mass / std::max(count, 0.25);
  }

  sim::WorldConfig world_;
  SearchParams params_;
};

}  // namespace hooda::bench
