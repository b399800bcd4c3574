//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/concepts/selection.hpp"

namespace glassmol::concepts {

struct EndpointConfig {
  std::string endpoint; // full URL of the chat-completion route
  std::string key;      // bearer token, may be empty
  std::string model = "gpt-4";
  double timeout_seconds = 60.0;
  int max_retries = 2; // re-prompts after the first response

  // GLASSMOL_LLM_ENDPOINT / GLASSMOL_LLM_KEY; nullopt without an endpoint.
  static std::optional<EndpointConfig> from_environment();
};

struct ChatMessage {
  std::string role;
  std::string content;
};

// One POST per call, no concurrency. Throws EndpointUnreachable on
// transport failure or a non-2xx status, MalformedResponse when the body
// lacks choices[0].message.content.
std::string chat_completion(const EndpointConfig &config,
                            const std::vector<ChatMessage> &messages);

struct PromptTemplate {
  std::string version; // file stem, e.g. "select_concepts.v1"
  std::string text;

  static PromptTemplate load(const std::filesystem::path &path);
  static PromptTemplate standard();

  // Substitutes {{task_text}}, {{positive_label_meaning}}, {{pool_listing}}
  // and {{k}}. Throws on a leftover placeholder.
  std::string render(const TaskDescription &task,
                     const std::vector<desc::ConceptDescriptor> &pool,
                     int k) const;
};

// Pool name for `line` under case folding, whitespace/underscore/hyphen
// equivalence and one trailing plural 's'; nullopt otherwise.
std::optional<std::string> match_concept_name(std::string_view line,
                                              const std::vector<std::string> &pool_names);

struct ParsedResponse {
  std::vector<std::string> names;   // matched, first occurrence order
  std::vector<std::string> unknown; // lines that matched nothing
  int duplicates = 0;
};

// One candidate per non-empty line; list markers ("1.", "-", "*") and
// surrounding backticks or quotes are stripped before matching.
ParsedResponse parse_selection_response(std::string_view content,
                                        const std::vector<std::string> &pool_names);

struct LlmSelection {
  ConceptSelection selection;
  std::vector<ChatMessage> transcript;
  int requests = 0;
};

// Sends the rendered prompt; a response is accepted outright when it is
// exactly k distinct pool names. Otherwise the validation errors are sent
// back, up to config.max_retries times; a re-prompted answer is accepted
// once it holds at least k valid names (first k kept, the rest listed in
// provenance). Fails with MalformedResponse when still short.
LlmSelection select_llm(const TaskDescription &task, int k,
                        const EndpointConfig &config,
                        const PromptTemplate &prompt = PromptTemplate::standard());

// Writes the selection and "<stem>.transcript.json" beside it.
void persist_llm_selection(const std::filesystem::path &path,
                           const LlmSelection &result);

} // namespace glassmol::concepts
