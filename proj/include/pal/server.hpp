#pragma once

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pal/interpreter.hpp"

namespace pal::server {

struct Config {
  std::filesystem::path examples_dir;
  std::optional<std::filesystem::path> webui_dir;  // static playground files
  std::chrono::milliseconds time_limit{10'000};     // per request
  std::size_t max_program_bytes = 256 * 1024;
  std::string semantics = "wf";
};

struct Reply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

namespace detail {

inline Reply json_reply(int status, const nlohmann::json& j) {
  return {status, "application/json", j.dump()};
}

inline Reply failure(int status, std::string message) {
  return json_reply(status, {{"error", std::move(message)}});
}

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1, cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2, cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3, cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto d = static_cast<unsigned char>(s[i + k]);
      if ((d & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (d & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline constexpr std::string_view kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>PAL</title></head>
<body>
<h1>PAL</h1>
<textarea id="program" rows="24" cols="80"></textarea><br>
<button id="process">Process</button>
<pre id="output"></pre>
<script>
document.getElementById('process').onclick = async () => {
  const r = await fetch('/process', {method: 'POST', headers: {'Content-Type': 'application/json'},
    body: JSON.stringify({program: document.getElementById('program').value})});
  const j = await r.json();
  document.getElementById('output').textContent = j.output ?? j.error;
};
</script>
</body></html>
)";

inline std::string content_type_for(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

}  // namespace detail

// Runs the program text of a JSON request {program, solutions?} in a fresh
// interpreter and answers {output, exitCode}.
inline Reply handle_process(std::string_view body, const Config& config) {
  if (body.size() > config.max_program_bytes + 4096)
    return detail::failure(413, "request too large");
  if (!detail::valid_utf8(body)) return detail::failure(400, "request body is not valid UTF-8");
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    return detail::failure(400, std::string("malformed request: ") + e.what());
  }
  if (!request.is_object()) return detail::failure(400, "request must be an object");
  if (!request.contains("program")) return detail::failure(422, "missing field 'program'");
  if (!request["program"].is_string()) return detail::failure(400, "field 'program' must be a string");
  const auto& program = request["program"].get_ref<const std::string&>();
  if (program.size() > config.max_program_bytes) return detail::failure(413, "program too large");

  RunOptions opts;
  opts.semantics = config.semantics;
  opts.time_limit = config.time_limit;
  if (request.contains("solutions") && !request["solutions"].is_null()) {
    const auto& s = request["solutions"];
    if (!s.is_number_integer() || s.get<std::int64_t>() < 1)
      return detail::failure(400, "field 'solutions' must be a positive integer");
    opts.solutions_cap = s.get<std::uint64_t>();
  }
  std::ostringstream out;
  const int code = run(program, nullptr, out, std::move(opts));
  return detail::json_reply(200, {{"output", out.str()}, {"exitCode", code}});
}

// Lists the `.pal` files of the examples directory, sorted by name.
inline Reply handle_examples(const Config& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  std::vector<fs::path> files;
  fs::directory_iterator it(config.examples_dir, ec);
  if (ec) return detail::failure(500, "cannot read examples directory");
  for (; it != fs::directory_iterator(); it.increment(ec)) {
    if (ec) return detail::failure(500, "cannot read examples directory");
    if (it->path().extension() == ".pal" && it->is_regular_file(ec)) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : files) {
    auto source = detail::read_file(f);
    if (!source) return detail::failure(500, "cannot read " + f.filename().string());
    list.push_back({{"name", f.stem().string()}, {"source", std::move(*source)}});
  }
  return detail::json_reply(200, list);
}

// Static playground files: "/" and "/assets/...".
inline Reply handle_static(std::string_view request_path, const Config& config) {
  namespace fs = std::filesystem;
  if (request_path == "/" || request_path == "/index.html") {
    if (config.webui_dir) {
      if (auto page = detail::read_file(*config.webui_dir / "index.html"))
        return {200, "text/html; charset=utf-8", std::move(*page)};
    }
    return {200, "text/html; charset=utf-8", std::string(detail::kFallbackPage)};
  }
  constexpr std::string_view prefix = "/assets/";
  if (!config.webui_dir || !request_path.starts_with(prefix)) return detail::failure(404, "not found");
  const fs::path relative{std::string(request_path.substr(prefix.size()))};
  for (const auto& part : relative)
    if (part == ".." || part.has_root_name() || part.has_root_directory()) return detail::failure(404, "not found");
  const fs::path file = *config.webui_dir / "assets" / relative;
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) return detail::failure(404, "not found");
  auto data = detail::read_file(file);
  if (!data) return detail::failure(404, "not found");
  return {200, detail::content_type_for(file), std::move(*data)};
}

inline void install(httplib::Server& http, Config config) {
  auto shared = std::make_shared<const Config>(std::move(config));
  auto send = [](httplib::Response& res, Reply r) {
    res.status = r.status;
    res.set_content(std::move(r.body), r.content_type);
  };
  http.set_payload_max_length(shared->max_program_bytes * 2 + 4096);
  http.Post("/process", [shared, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_process(req.body, *shared));
  });
  http.Get("/examples", [shared, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_examples(*shared));
  });
  http.Get(R"(/|/index\.html|/assets/.*)", [shared, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_static(req.path, *shared));
  });
}

// Splits "host:port", ":port" or "port"; an empty host means all interfaces.
inline std::pair<std::string, int> parse_address(std::string_view addr) {
  std::string host = "0.0.0.0";
  std::string_view port = addr;
  if (const auto colon = addr.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(addr.substr(0, colon));
    port = addr.substr(colon + 1);
  }
  int value = 0;
  if (port.empty() || port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      (value = std::stoi(std::string(port))) > 65535)
    throw std::invalid_argument("invalid listen address '" + std::string(addr) + "'");
  return {host, value};
}

// Blocks serving requests until the server is stopped.
inline bool serve(std::string_view addr, Config config) {
  const auto [host, port] = parse_address(addr);
  httplib::Server http;
  install(http, std::move(config));
  return http.listen(host, port);
}

}  // namespace pal::server
