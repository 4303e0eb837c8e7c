#pragma once

#include <string_view>

// Data files from data/ compiled into the library at configure time.
namespace dona::builtin {

std::string_view rules_json();
std::string_view templates_tsv();
std::string_view sample_catalog_json();

}  // namespace dona::builtin
