#include "nocs/params.hpp"

#include <cmath>
#include <string>

#include "nocs/error.hpp"

namespace nocs {

void validate(const NocsParams& params) {
  if (params.block_size < 1) {
    throw Error(ErrorCode::invalid_params,
                "block size must be >= 1, got " + std::to_string(params.block_size));
  }
  if (params.stack_size < 2) {
    throw Error(ErrorCode::invalid_params,
                "stack size must be >= 2, got " + std::to_string(params.stack_size));
  }
  if (params.search_radius < 1) {
    throw Error(ErrorCode::invalid_params,
                "search radius must be >= 1, got " + std::to_string(params.search_radius));
  }
  if (!(params.batch_fraction > 0.0 && params.batch_fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_params, "batch fraction must lie in (0, 1]");
  }
  const long long extent = params.window_extent();
  if (extent * extent < params.stack_size) {
    throw Error(ErrorCode::invalid_params,
                "search window of " + std::to_string(extent * extent) +
                    " candidates cannot hold a stack of " + std::to_string(params.stack_size));
  }
}

}  // namespace nocs
