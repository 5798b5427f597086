#include "counselforge/dataset/finetune.hpp"

#include <nlohmann/json.hpp>

#include "counselforge/common/text.hpp"

namespace counselforge::dataset {

using gateway::ChatMessage;
using gateway::Role;
using nlohmann::json;

void validate_record(const FineTuneRecord& record) {
  const auto& m = record.messages;
  if (m.size() < 3) throw InvalidRecord("record needs a system message and one exchange");
  if (m.front().role != Role::system) throw InvalidRecord("first message must be system");
  for (std::size_t i = 1; i < m.size(); ++i) {
    const Role want = (i % 2 == 1) ? Role::user : Role::assistant;
    if (m[i].role != want) {
      throw InvalidRecord("message " + std::to_string(i) + " should be " +
                          std::string(gateway::to_string(want)));
    }
  }
  if (m.back().role != Role::assistant) throw InvalidRecord("record must end on assistant");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (text::trim(m[i].content).empty()) {
      throw InvalidRecord("message " + std::to_string(i) + " is empty");
    }
  }
}

bool is_valid_record(const FineTuneRecord& record) noexcept {
  try {
    validate_record(record);
    return true;
  } catch (...) {
    return false;
  }
}

FineTuneRecord to_finetune_record(const ingest::SessionTranscript& session,
                                  std::string_view system_prompt) {
  ingest::validate_session(session);
  if (session.turns.front().speaker != ingest::Speaker::client) {
    throw PreconditionError(session.session_id + ": session must open with the client");
  }
  if (text::trim(system_prompt).empty()) throw PreconditionError("system prompt is empty");

  auto turns = session.turns;
  if (turns.back().speaker == ingest::Speaker::client) turns.pop_back();
  if (turns.empty()) throw EmptyAfterTrim(session.session_id + ": no counselor turn");

  FineTuneRecord record;
  record.messages.reserve(turns.size() + 1);
  record.messages.push_back(ChatMessage{Role::system, std::string(system_prompt)});
  for (const auto& t : turns) {
    record.messages.push_back(
        ChatMessage{t.speaker == ingest::Speaker::client ? Role::user : Role::assistant, t.text});
  }
  return record;
}

std::string serialize_record(const FineTuneRecord& record) {
  json messages = json::array();
  for (const auto& m : record.messages) {
    messages.push_back(json{{"role", gateway::to_string(m.role)}, {"content", m.content}});
  }
  return json{{"messages", std::move(messages)}}.dump();
}

FineTuneRecord parse_record(std::string_view line) {
  FineTuneRecord record;
  try {
    const auto j = json::parse(line);
    for (const auto& m : j.at("messages")) {
      record.messages.push_back(ChatMessage{
          gateway::role_from_string(m.at("role").get<std::string>()),
          m.at("content").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw InvalidRecord(std::string("malformed record: ") + e.what());
  } catch (const Error& e) {
    throw InvalidRecord(std::string("malformed record: ") + e.what());
  }
  validate_record(record);
  return record;
}

}  // namespace counselforge::dataset
