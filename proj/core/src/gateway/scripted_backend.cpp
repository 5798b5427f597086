#include "counselforge/gateway/scripted_backend.hpp"

#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/gateway/errors.hpp"

namespace counselforge::gateway {

using nlohmann::json;

FailureClass classify_status(int status) {
  if (status >= 200 && status < 300) return FailureClass::none;
  if (status == 0 || status == 408 || status == 425 || status == 429 ||
      (status >= 500 && status < 600)) {
    return FailureClass::transient;
  }
  return FailureClass::permanent;
}

ScriptRule script_rule_from_json(const json& j) {
  ScriptRule r;
  if (j.contains("match")) r.match = j.at("match").get<std::string>();
  if (j.contains("message_count")) r.message_count = j.at("message_count").get<std::size_t>();
  if (j.contains("reply")) r.replies.push_back(j.at("reply").get<std::string>());
  if (j.contains("replies")) {
    for (const auto& s : j.at("replies")) r.replies.push_back(s.get<std::string>());
  }
  r.fail_times = j.value("fail_times", 0);
  r.fail_status = j.value("fail_status", 503);
  r.finish_reason = finish_reason_from_string(j.value("finish_reason", std::string("stop")));
  if (r.replies.empty() && r.fail_times == 0) {
    throw ConfigError("scripted rule needs reply/replies or fail_times");
  }
  return r;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules) {
  rules_.reserve(rules.size());
  for (auto& r : rules) rules_.push_back(RuleState{std::move(r), 0});
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::vector<ScriptRule> rules;
  for (const auto& row : read_jsonl(path)) rules.push_back(script_rule_from_json(row));
  return std::make_shared<ScriptedBackend>(std::move(rules));
}

TransportReply ScriptedBackend::send(const ChatRequest& request) {
  std::string haystack;
  std::size_t non_system = 0;
  for (const auto& m : request.messages) {
    haystack += m.content;
    haystack += '\n';
    if (m.role != Role::system) ++non_system;
  }
  const auto fp = fingerprint(request);

  std::lock_guard lock(mu_);
  ScriptedCall call{std::chrono::steady_clock::now(), fp, std::nullopt, 0};
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    auto& state = rules_[i];
    const auto& rule = state.rule;
    if (rule.match && haystack.find(*rule.match) == std::string::npos) continue;
    if (rule.message_count && *rule.message_count != non_system) continue;

    const std::size_t hit = state.hits++;
    call.rule = i;
    TransportReply reply;
    if (hit < static_cast<std::size_t>(rule.fail_times) || rule.replies.empty()) {
      reply.status = rule.fail_status;
      reply.error = "scripted failure";
    } else {
      const std::size_t k = hit - static_cast<std::size_t>(rule.fail_times);
      reply.content = rule.replies[std::min(k, rule.replies.size() - 1)];
      reply.finish_reason = rule.finish_reason;
    }
    call.status = reply.status;
    log_.push_back(call);
    return reply;
  }
  log_.push_back(call);
  throw FixtureMiss("no scripted rule matches request " + fp.substr(0, 12));
}

std::vector<ScriptedCall> ScriptedBackend::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t ScriptedBackend::call_count() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

}  // namespace counselforge::gateway
