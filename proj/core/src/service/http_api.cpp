#include "gpptutor/service/http_api.hpp"

#include <chrono>
#include <vector>

#include <httplib.h>

#include "gpptutor/logic/parser.hpp"
#include "gpptutor/proof/serialization.hpp"

namespace gpptutor::service {

namespace {

using nlohmann::json;

HttpResponse Reply(int status, const json& body) { return {status, body.dump()}; }

HttpResponse Error(int status, std::string_view code, const std::string& message) {
  return Reply(status, {{"error", {{"code", code}, {"message", message}}}});
}

int StatusOf(ServiceError::Code code) {
  switch (code) {
    case ServiceError::Code::kNotFound: return 404;
    case ServiceError::Code::kInvalidRequest: return 400;
    case ServiceError::Code::kDuplicate:
    case ServiceError::Code::kModeViolation:
    case ServiceError::Code::kNoHelp:
    case ServiceError::Code::kPreconditionFailed:
    case ServiceError::Code::kCurriculumExhausted: return 409;
  }
  return 500;
}

std::string_view NameOf(ServiceError::Code code) {
  switch (code) {
    case ServiceError::Code::kNotFound: return "not_found";
    case ServiceError::Code::kDuplicate: return "duplicate";
    case ServiceError::Code::kInvalidRequest: return "invalid_request";
    case ServiceError::Code::kModeViolation: return "mode_violation";
    case ServiceError::Code::kNoHelp: return "no_help";
    case ServiceError::Code::kPreconditionFailed: return "precondition_failed";
    case ServiceError::Code::kCurriculumExhausted: return "curriculum_exhausted";
  }
  return "internal";
}

std::string_view NameOf(proof::ProofError::Code code) {
  switch (code) {
    case proof::ProofError::Code::kUnknownNode: return "unknown_node";
    case proof::ProofError::Code::kUnjustifiedParent: return "unjustified_parent";
    case proof::ProofError::Code::kAlreadyJustified: return "already_justified";
    case proof::ProofError::Code::kCycle: return "cycle";
    case proof::ProofError::Code::kInvalidRequest: return "invalid_step";
    case proof::ProofError::Code::kInvalidSolution: return "invalid_solution";
    case proof::ProofError::Code::kInvalidProblem: return "invalid_problem";
  }
  return "proof_error";
}

std::vector<std::string> Segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    out.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j;
  }
  return out;
}

json StepResultJson(const StepResult& r) {
  json j = {{"attempt", proof::ToJson(r.attempt)}, {"complete", r.complete}};
  if (r.auto_hint) {
    j["hint"] = {{"order", r.auto_hint->order},
                 {"target", r.auto_hint->target},
                 {"rule", r.auto_hint->rule},
                 {"message", r.auto_hint->message}};
  }
  return j;
}

}  // namespace

proof::Timestamp WallClockMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct HttpApi::Server {
  httplib::Server http;
};

HttpApi::HttpApi(TutorService& service, Clock clock)
    : service_(service), clock_(std::move(clock)), server_(std::make_unique<Server>()) {
  auto handle = [this](const httplib::Request& req, httplib::Response& res) {
    const std::string t = req.has_param("t") ? req.get_param_value("t") : std::string();
    const HttpResponse r = Dispatch(req.method, req.path, t, req.body);
    res.status = r.status;
    res.set_header("X-Api-Version", std::to_string(kApiVersion));
    res.set_content(r.body, "application/json");
  };
  server_->http.Get(R"(/.*)", handle);
  server_->http.Post(R"(/.*)", handle);
}

HttpApi::~HttpApi() { Stop(); }

HttpResponse HttpApi::Dispatch(const std::string& method, const std::string& path, const std::string& query_t,
                               const std::string& body) {
  try {
    const json payload = body.empty() ? json::object() : json::parse(body);
    if (!payload.is_object()) return Error(400, "invalid_request", "request body must be a JSON object");
    proof::Timestamp t = payload.contains("t") ? payload.at("t").get<proof::Timestamp>() : clock_();
    if (!query_t.empty()) t = std::stoll(query_t);

    const std::vector<std::string> seg = Segments(path);
    if (method == "GET" && seg.size() == 1 && seg[0] == "health") {
      return Reply(200, {{"status", "ok"}, {"version", kApiVersion}});
    }
    if (method == "GET" && seg.size() == 1 && seg[0] == "rules") {
      return Reply(200, logic::RuleCatalog::Standard().ToJson());
    }
    if (seg.empty() || seg[0] != "sessions") return Error(404, "not_found", "no route for " + path);

    if (seg.size() == 1 && method == "POST") {
      std::optional<std::uint64_t> seed;
      if (payload.contains("seed")) seed = payload.at("seed").get<std::uint64_t>();
      return Reply(201, service_.CreateSession(payload.at("student").get<std::string>(), seed, t));
    }
    if (seg.size() < 2) return Error(404, "not_found", "no route for " + path);
    const std::string& id = seg[1];
    if (seg.size() == 2 && method == "GET") return Reply(200, service_.Snapshot(id));
    if (seg.size() != 3) return Error(404, "not_found", "no route for " + path);
    const std::string& action = seg[2];

    if (method == "GET" && action == "problem") return Reply(200, service_.CurrentProblem(id, t));
    if (method == "GET" && action == "log") return Reply(200, {{"session", id}, {"events", service_.Log(id)}});
    if (method != "POST") return Error(405, "method_not_allowed", method + " " + path);

    if (action == "condition") {
      std::optional<analytics::Condition> forced;
      if (payload.contains("condition")) {
        forced = analytics::ConditionFromString(payload.at("condition").get<std::string>());
      }
      const analytics::Condition c = service_.AssignCondition(id, forced, t);
      return Reply(200, {{"session", id}, {"condition", analytics::ToString(c)}});
    }
    if (action == "step") {
      StepCommand command;
      if (payload.value("action", std::string()) == "advance") {
        command.advance = true;
      } else {
        command.request = proof::StepRequestFromJson(payload);
      }
      return Reply(200, StepResultJson(service_.SubmitStep(id, command, t)));
    }
    if (action == "hint") {
      const gpp::Hint h = service_.RequestHint(id, t);
      return Reply(200, {{"order", h.order}, {"target", h.target}, {"rule", h.rule}, {"message", h.message}});
    }
    if (action == "explanation") {
      const auto r = service_.SubmitExplanation(id, payload.at("text").get<std::string>(),
                                                payload.value("synthetic", false), t);
      return Reply(200, {{"session", id},
                         {"problem", r.problem_id},
                         {"prompt", r.prompt},
                         {"response", r.response},
                         {"t", r.timestamp}});
    }
    if (action == "complete") {
      const auto score = service_.CompleteProblem(id, t);
      json out = {{"session", id}, {"score", score ? analytics::ToJson(*score) : json(nullptr)}};
      const json snap = service_.Snapshot(id);
      if (!snap.at("explanation_owed").is_null()) out["prompt"] = snap.at("explanation_owed");
      out["finished"] = snap.at("finished");
      return Reply(200, out);
    }
    return Error(404, "not_found", "no route for " + path);
  } catch (const ServiceError& e) {
    return Error(StatusOf(e.code()), NameOf(e.code()), e.what());
  } catch (const proof::ProofError& e) {
    const bool missing = e.code() == proof::ProofError::Code::kUnknownNode;
    return Error(missing ? 404 : 409, NameOf(e.code()), e.what());
  } catch (const logic::ParseError& e) {
    return Error(400, "parse_error", e.what());
  } catch (const logic::ArityError& e) {
    return Error(400, "arity_error", e.what());
  } catch (const logic::UnknownRuleError& e) {
    return Error(400, "unknown_rule", e.what());
  } catch (const json::exception& e) {
    return Error(400, "invalid_request", e.what());
  } catch (const std::invalid_argument& e) {
    return Error(400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    return Error(500, "internal", e.what());
  }
}

bool HttpApi::Listen(const std::string& host, int port) { return server_->http.listen(host, port); }

int HttpApi::BindToAnyPort(const std::string& host) { return server_->http.bind_to_any_port(host); }

bool HttpApi::ListenAfterBind() { return server_->http.listen_after_bind(); }

void HttpApi::Stop() {
  if (server_) server_->http.stop();
}

bool HttpApi::running() const { return server_->http.is_running(); }

}  // namespace gpptutor::service
