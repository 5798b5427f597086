#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "counselforge/common/errors.hpp"
#include "counselforge/gateway/chat.hpp"
#include "counselforge/ingest/session.hpp"

namespace counselforge::dataset {

class EmptyAfterTrim : public Error {
 public:
  using Error::Error;
};

class InvalidRecord : public Error {
 public:
  using Error::Error;
};

/// One chat-format training example: a single system message, then strictly
/// alternating user/assistant messages ending on assistant.
struct FineTuneRecord {
  std::vector<gateway::ChatMessage> messages;

  friend bool operator==(const FineTuneRecord&, const FineTuneRecord&) = default;
};

/// Throws InvalidRecord naming the first violated invariant.
void validate_record(const FineTuneRecord& record);
bool is_valid_record(const FineTuneRecord& record) noexcept;

/// Client turns become user messages and counselor turns assistant messages.
/// A trailing client turn is dropped. The session must be valid and open with
/// the client (PreconditionError); EmptyAfterTrim when nothing is left.
FineTuneRecord to_finetune_record(const ingest::SessionTranscript& session,
                                  std::string_view system_prompt);

/// {"messages":[{"role":...,"content":...},...]} on a single line.
std::string serialize_record(const FineTuneRecord& record);
/// Parses and validates one line. Throws InvalidRecord.
FineTuneRecord parse_record(std::string_view line);

}  // namespace counselforge::dataset
