#include <CLI11.hpp>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "pal/interpreter.hpp"
#include "pal/server.hpp"

#ifndef PAL_DEFAULT_EXAMPLES_DIR
#define PAL_DEFAULT_EXAMPLES_DIR "corpus"
#endif

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAL action language interpreter"};
  std::string file;
  std::string semantics = "wf";
  std::string serve_addr;
  std::string examples_dir;
  bool batch = false;
  app.add_option("file", file, "Program file; standard input stays open afterwards for more sentences");
  app.add_option("--semantics", semantics, "Transition semantics backend")->capture_default_str();
  app.add_option("--serve", serve_addr, "Serve the HTTP endpoint on [HOST:]PORT instead of running a program");
  app.add_option("--examples-dir", examples_dir, "Directory of bundled .pal examples (default: $PAL_EXAMPLES)");
  app.add_flag("--batch", batch, "Do not read standard input after the program file");
  CLI11_PARSE(app, argc, argv);

  std::ios::sync_with_stdio(false);

  if (!serve_addr.empty()) {
    pal::server::Config config;
    config.examples_dir = examples_dir.empty() ? env_or("PAL_EXAMPLES", PAL_DEFAULT_EXAMPLES_DIR) : examples_dir;
    if (const char* ui = std::getenv("PAL_WEBUI"); ui && *ui) config.webui_dir = ui;
    config.semantics = semantics;
    try {
      pal::require_known_semantics(semantics);
      std::cerr << "pal: serving on " << serve_addr << " (examples: " << config.examples_dir.string() << ")\n";
      if (!pal::server::serve(serve_addr, std::move(config))) {
        std::cerr << "pal: cannot listen on " << serve_addr << '\n';
        return 1;
      }
    } catch (const std::exception& e) {
      std::cerr << "pal: " << e.what() << '\n';
      return 2;
    }
    return 0;
  }

  pal::RunOptions opts;
  opts.semantics = semantics;
  std::string program;
  std::istream* interactive = nullptr;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::cerr << "pal: cannot read " << file << '\n';
      return 2;
    }
    program.assign(std::istreambuf_iterator<char>(in), {});
    if (!batch) interactive = &std::cin;
  } else if (isatty(STDIN_FILENO) && !batch) {
    interactive = &std::cin;
  } else {
    program.assign(std::istreambuf_iterator<char>(std::cin), {});
  }
  return pal::run(program, interactive, std::cout, std::move(opts));
}
