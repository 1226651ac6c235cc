#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <httplib.h>

#include "covroute/graph_io.hpp"
#include "covroute/options.hpp"
#include "covroute/plan_io.hpp"
#include "covroute/sim_io.hpp"

namespace covroute {

/// Local HTTP front end over one road graph and at most one simulation.
///
///   GET  /graph        current labelled graph
///   POST /plan         {"from","to", planner keys...} -> plan document
///   POST /sim/start    same body; 409 while a transport is en route
///   POST /sim/event    one event object -> snapshot
///   POST /sim/advance  {"dt_s": seconds} -> snapshot
///   GET  /sim/state    latest snapshot
///   GET  /sim/stream   server-sent events, one snapshot per message
///
/// Plans run concurrently; simulation mutations are serialized by a mutex
/// and observers only ever see finished snapshots.
class DispatchService
{
public:
  explicit DispatchService(RoadGraph graph)
    : graph_(std::make_shared<const RoadGraph>(std::move(graph)))
  {}

  void install(httplib::Server& server)
  {
    server.Get("/graph", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_ptr<const RoadGraph> g;
      {
        std::lock_guard lock(mutex_);
        g = sim_ ? sim_->graph : graph_;
      }
      res.set_content(fixed_json_graph(*g), "application/json");
    });

    server.Post("/plan", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        const auto body = parse_body(req);
        const auto g = graph_;
        const auto [from, to] = endpoints(*g, body);
        const auto result = plan(*g, from, to, plan_options_from_json(body).resolve());
        if (result.status == PlanStatus::unreachable)
          res.status = 422;
        res.set_content(fixed_json(plan_to_json(*g, result)), "application/json");
      });
    });

    server.Post("/sim/start", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        const auto body = parse_body(req);
        const auto [from, to] = endpoints(*graph_, body);
        const auto cfg = plan_options_from_json(body).resolve();
        std::unique_lock lock(mutex_);
        if (sim_ && sim_->status == TransportStatus::en_route) {
          res.status = 409;
          res.set_content(error_json("a transport is already en route"), "application/json");
          return;
        }
        TransportState st;
        try {
          st = start(graph_, from, to, cfg);
        } catch (const SimError& ex) {
          res.status = 422;
          res.set_content(error_json(ex.what()), "application/json");
          return;
        }
        publish(lock, std::move(st), "start");
        res.set_content(snapshot_, "application/json");
      });
    });

    server.Post("/sim/event", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        const auto ev = event_from_json(parse_body(req));
        std::unique_lock lock(mutex_);
        if (!require_session(res))
          return;
        try {
          auto next = apply_event(*sim_, ev);
          publish(lock, std::move(next), event_name(ev.kind));
        } catch (const SimError& ex) {
          res.status = 409;
          res.set_content(error_json(ex.what()), "application/json");
          return;
        }
        res.set_content(snapshot_, "application/json");
      });
    });

    server.Post("/sim/advance", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        const auto body = parse_body(req);
        const double dt = body.at("dt_s").get<double>();
        std::unique_lock lock(mutex_);
        if (!require_session(res))
          return;
        if (sim_->status != TransportStatus::en_route) {
          res.status = 409;
          res.set_content(error_json("transport already finished"), "application/json");
          return;
        }
        auto next = advance(*sim_, dt);
        publish(lock, std::move(next), "step");
        res.set_content(snapshot_, "application/json");
      });
    });

    server.Get("/sim/state", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      if (!require_session(res))
        return;
      res.set_content(snapshot_, "application/json");
    });

    server.Get("/sim/stream", [this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Cache-Control", "no-cache");
      auto last_seen = std::make_shared<std::uint64_t>(0);
      res.set_chunked_content_provider("text/event-stream", [this, last_seen](std::size_t, httplib::DataSink& sink) {
        std::unique_lock lock(mutex_);
        changed_.wait_for(lock, std::chrono::milliseconds(250), [&] { return stopping_ || version_ != *last_seen; });
        if (stopping_) {
          sink.done();
          return true;
        }
        if (version_ != *last_seen && !snapshot_.empty()) {
          *last_seen = version_;
          const std::string msg = "data: " + snapshot_ + "\n\n";
          lock.unlock();
          return sink.write(msg.data(), msg.size());
        }
        return sink.is_writable();
      });
    });
  }

  /// Wakes stream handlers so a server can shut down.
  void stop()
  {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    changed_.notify_all();
  }

  std::shared_ptr<const RoadGraph> graph() const { return graph_; }

private:
  static std::string error_json(const std::string& message) { return fixed_json(Json{{"error", message}}); }

  static std::string fixed_json_graph(const RoadGraph& g) { return graph_to_json(g).dump(); }

  static Json parse_body(const httplib::Request& req)
  {
    auto body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
      throw std::invalid_argument("request body must be a JSON object");
    return body;
  }

  static std::pair<NodeIndex, NodeIndex> endpoints(const RoadGraph& g, const Json& body)
  {
    if (!body.contains("from") || !body.contains("to"))
      throw std::invalid_argument("\"from\" and \"to\" are required");
    return {g.node_index(body["from"].get<std::string>()), g.node_index(body["to"].get<std::string>())};
  }

  template <class Fn>
  static void handle(httplib::Response& res, Fn&& fn)
  {
    try {
      fn();
    } catch (const UnknownNode& ex) {
      res.status = 404;
      res.set_content(error_json(ex.what()), "application/json");
    } catch (const std::exception& ex) {
      res.status = 400;
      res.set_content(error_json(ex.what()), "application/json");
    }
  }

  bool require_session(httplib::Response& res) const
  {
    if (sim_)
      return true;
    res.status = 404;
    res.set_content(error_json("no simulation session"), "application/json");
    return false;
  }

  void publish(std::unique_lock<std::mutex>& lock, TransportState st, std::string_view trigger)
  {
    sim_ = std::move(st);
    snapshot_ = fixed_json(state_to_json(*sim_, trigger));
    ++version_;
    lock.unlock();
    changed_.notify_all();
    lock.lock();
  }

  std::shared_ptr<const RoadGraph> graph_;
  mutable std::mutex mutex_;
  std::condition_variable changed_;
  std::optional<TransportState> sim_;
  std::string snapshot_;
  std::uint64_t version_ = 0;
  bool stopping_ = false;
};

} // namespace covroute
