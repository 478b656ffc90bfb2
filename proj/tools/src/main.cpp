#include "padic_cli/commands.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char **argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto res = padic::cli::run(args);
  if (!res.help.empty()) {
    std::cout << res.help;
    return 0;
  }
  const std::string text = padic::cli::render(res.report);
  std::cout << text;
  if (res.json_out) {
    std::ofstream out(*res.json_out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << *res.json_out << "\n";
      return padic::cli::UsageError;
    }
    out << text;
  }
  return res.exit_code;
}
