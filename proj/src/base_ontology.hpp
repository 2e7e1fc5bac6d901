#pragma once

namespace hcps::detail {

extern const char* const kBaseOntology;

}  // namespace hcps::detail
