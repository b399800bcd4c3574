//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/concepts/llm_client.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "glassmol/util/digest.hpp"

namespace glassmol::concepts {

namespace {

using nlohmann::json;

Error malformed(const std::string &message) {
  return Error(ErrorCategory::kEndpoint, "MalformedResponse", message);
}

Error unreachable(const std::string &message) {
  return Error(ErrorCategory::kEndpoint, "EndpointUnreachable", message);
}

// Splits "scheme://host[:port]/path" into the origin and the path.
std::pair<std::string, std::string> split_url(const std::string &url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos)
    throw Error(ErrorCategory::kUsage, "BadEndpoint",
                "endpoint '" + url + "' must start with http:// or https://");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos)
    return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

// Case-folded key with runs of whitespace, '_' and '-' collapsed to '_'.
std::string fold(std::string_view s) {
  std::string out;
  bool sep = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      sep = !out.empty();
      continue;
    }
    if (sep)
      out += '_';
    sep = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string_view strip_marker(std::string_view s) {
  s = trim(s);
  if (!s.empty() && (s.front() == '-' || s.front() == '*' || s.front() == '+')) {
    s.remove_prefix(1);
  } else {
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')'))
      s.remove_prefix(i + 1);
  }
  s = trim(s);
  while (s.size() >= 2 && (s.front() == '`' || s.front() == '"' ||
                           s.front() == '\'') &&
         s.back() == s.front()) {
    s.remove_prefix(1);
    s.remove_suffix(1);
    s = trim(s);
  }
  return s;
}

} // namespace

std::optional<EndpointConfig> EndpointConfig::from_environment() {
  const char *endpoint = std::getenv("GLASSMOL_LLM_ENDPOINT");
  if (!endpoint || !*endpoint)
    return std::nullopt;
  EndpointConfig c;
  c.endpoint = endpoint;
  if (const char *key = std::getenv("GLASSMOL_LLM_KEY"))
    c.key = key;
  return c;
}

std::string chat_completion(const EndpointConfig &config,
                            const std::vector<ChatMessage> &messages) {
  const auto [origin, path] = split_url(config.endpoint);
  httplib::Client client(origin);
  const auto sec = static_cast<time_t>(config.timeout_seconds);
  const auto usec = static_cast<time_t>(
      (config.timeout_seconds - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  json body;
  body["model"] = config.model;
  body["temperature"] = 0;
  body["messages"] = json::array();
  for (const auto &m : messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  httplib::Headers headers;
  if (!config.key.empty())
    headers.emplace("Authorization", "Bearer " + config.key);

  const auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw unreachable(config.endpoint + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw unreachable(config.endpoint + ": HTTP " + std::to_string(res->status));
  try {
    const json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception &e) {
    throw malformed("response body: " + std::string(e.what()));
  }
}

PromptTemplate PromptTemplate::load(const std::filesystem::path &path) {
  return {path.stem().string(), util::read_file(path)};
}

PromptTemplate PromptTemplate::standard() {
  return load(desc::data_directory() / "prompts" / "select_concepts.v1.txt");
}

std::string PromptTemplate::render(const TaskDescription &task,
                                   const std::vector<desc::ConceptDescriptor> &pool,
                                   int k) const {
  std::string listing;
  for (const auto &d : pool)
    listing += "- " + d.name + " (" + std::string(desc::category_name(d.category)) +
               "): " + d.description + "\n";
  if (!listing.empty())
    listing.pop_back();
  const std::pair<std::string, std::string> subs[] = {
      {"{{task_text}}", task.text},
      {"{{positive_label_meaning}}", task.positive_label_meaning},
      {"{{pool_listing}}", listing},
      {"{{k}}", std::to_string(k)},
  };
  std::string out = text;
  for (const auto &[key, value] : subs) {
    for (auto pos = out.find(key); pos != std::string::npos;
         pos = out.find(key, pos + value.size()))
      out.replace(pos, key.size(), value);
  }
  if (const auto left = out.find("{{"); left != std::string::npos)
    throw Error(ErrorCategory::kData, "BadPromptTemplate",
                version + ": unresolved placeholder near '" +
                    out.substr(left, 24) + "'");
  return out;
}

std::optional<std::string>
match_concept_name(std::string_view line,
                   const std::vector<std::string> &pool_names) {
  const std::string key = fold(line);
  if (key.empty())
    return std::nullopt;
  for (const auto &n : pool_names)
    if (fold(n) == key)
      return n;
  for (const auto &n : pool_names) {
    const std::string f = fold(n);
    if (key + "s" == f || f + "s" == key)
      return n;
  }
  return std::nullopt;
}

ParsedResponse parse_selection_response(std::string_view content,
                                        const std::vector<std::string> &pool_names) {
  ParsedResponse out;
  std::set<std::string> seen;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos)
      end = content.size();
    const std::string_view line = strip_marker(content.substr(start, end - start));
    start = end + 1;
    if (line.empty())
      continue;
    if (auto name = match_concept_name(line, pool_names)) {
      if (seen.insert(*name).second)
        out.names.push_back(*name);
      else
        ++out.duplicates;
    } else {
      out.unknown.emplace_back(line);
    }
  }
  return out;
}

LlmSelection select_llm(const TaskDescription &task, int k,
                        const EndpointConfig &config,
                        const PromptTemplate &prompt) {
  const auto &pool = desc::pool();
  const int m = static_cast<int>(pool.size());
  if (k < 1 || k > m)
    throw Error(ErrorCategory::kUsage, "InvalidK",
                "k=" + std::to_string(k) + " outside 1.." + std::to_string(m));
  if (task.text.empty())
    throw Error(ErrorCategory::kUsage, "EmptyTask",
                "task '" + task.task_id + "' has no description text");
  const std::vector<std::string> names = desc::pool_names();

  LlmSelection out;
  out.transcript.push_back({"user", prompt.render(task, pool, k)});
  std::string problems;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    const std::string reply = chat_completion(config, out.transcript);
    ++out.requests;
    out.transcript.push_back({"assistant", reply});
    const ParsedResponse parsed = parse_selection_response(reply, names);
    const int valid = static_cast<int>(parsed.names.size());
    const bool exact = valid == k && parsed.unknown.empty() && parsed.duplicates == 0;
    if (exact || (attempt > 0 && valid >= k)) {
      ConceptSelection &s = out.selection;
      s.task_id = task.task_id;
      s.method = SelectionMethod::kLlm;
      s.k = k;
      s.names.assign(parsed.names.begin(), parsed.names.begin() + k);
      s.provenance["endpoint"] = config.endpoint;
      s.provenance["model"] = config.model;
      s.provenance["prompt"] = prompt.version;
      s.provenance["prompt_digest"] = util::sha256_hex(prompt.text);
      s.provenance["response_digest"] = util::sha256_hex(reply);
      s.provenance["requests"] = std::to_string(out.requests);
      s.provenance["timestamp"] = utc_timestamp();
      if (!parsed.unknown.empty()) {
        std::string list;
        for (const auto &u : parsed.unknown)
          list += (list.empty() ? "" : "; ") + u;
        s.provenance["unknown_names"] = list;
      }
      s.validate();
      return out;
    }
    problems.clear();
    if (valid != k)
      problems += "You returned " + std::to_string(valid) +
                  " valid concept names; exactly " + std::to_string(k) +
                  " are required.\n";
    for (const auto &u : parsed.unknown)
      problems += "'" + u + "' is not a concept in the list.\n";
    if (parsed.duplicates > 0)
      problems += "Some names were repeated.\n";
    out.transcript.push_back(
        {"user", problems + "Answer again with exactly " + std::to_string(k) +
                     " names copied from the list, one per line, nothing else."});
  }
  throw malformed("no valid selection of " + std::to_string(k) + " after " +
                  std::to_string(out.requests) + " requests: " + problems);
}

void persist_llm_selection(const std::filesystem::path &path,
                           const LlmSelection &result) {
  write_selection(path, result.selection);
  json t = json::array();
  for (const auto &m : result.transcript)
    t.push_back({{"role", m.role}, {"content", m.content}});
  std::filesystem::path tpath = path;
  tpath.replace_extension(".transcript.json");
  util::write_file_atomic(tpath, t.dump(2) + "\n");
}

} // namespace glassmol::concepts
