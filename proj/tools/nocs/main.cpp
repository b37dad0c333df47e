// nocs: fill missing pixels of one image channel from the remaining channels.
//
//   nocs mask        --input clean.png --output distorted.png --mask-out mask.png
//   nocs reconstruct --input distorted.png --mask mask.png --output restored.png
//   nocs evaluate    clean.png restored.png [--csv scores.csv]
//   nocs batch       --images dir/ --csv scores.csv

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace {

using nocs::cli::RunConfig;

void add_channel(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--channel", config.channel, "Index of the distorted channel")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

std::vector<CLI::Option*> add_mask_spec(CLI::App* cmd, RunConfig& config) {
  std::vector<CLI::Option*> options;
  options.push_back(
      cmd->add_option_function<std::string>(
             "--mask-pattern",
             [&config](const std::string& name) {
               config.pattern = *nocs::parse_mask_pattern(name);
             },
             "Generated mask layout (rect_loss, hbar_loss, mixed_loss, random_unmask, "
             "four_quadrant)")
          ->check(CLI::IsMember({"rect_loss", "hbar_loss", "mixed_loss", "random_unmask",
                                 "four_quadrant"}))
          ->default_str("four_quadrant"));
  options.push_back(cmd->add_option("--density", config.density, "Fraction of missing pixels")
                        ->capture_default_str()
                        ->check(CLI::Range(0.0, 1.0)));
  options.push_back(cmd->add_option("--element-size", config.element_size,
                                    "Hole/bar size in pixels (default: 12 at 1200 px, scaled)")
                        ->check(CLI::PositiveNumber));
  options.push_back(
      cmd->add_option("--seed", config.seed, "Seed for mask generation")->capture_default_str());
  return options;
}

void add_params(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--block-size", config.params.block_size, "Block side length S")
      ->capture_default_str();
  cmd->add_option("--stack-size", config.params.stack_size, "Matched blocks per pixel")
      ->capture_default_str();
  cmd->add_option("--search-radius", config.params.search_radius,
                  "Half-width of the search window")
      ->capture_default_str();
  cmd->add_option("--batch-fraction", config.params.batch_fraction,
                  "Share of pending pixels per iteration")
      ->capture_default_str();
  cmd->add_option("--threads", config.workers, "Worker threads (0: all cores)")
      ->capture_default_str();
  cmd->add_flag("--progress", config.progress, "Report progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local cross-spectral reconstruction of missing pixels"};
  app.require_subcommand(1);
  RunConfig config;

  auto* mask = app.add_subcommand("mask", "Generate or apply a mask to one channel");
  mask->add_option("-i,--input", config.input, "Clean image")->required();
  mask->add_option("-o,--output", config.output, "Distorted image to write")->required();
  mask->add_option("--mask-out", config.mask_output, "Generated mask to write");
  auto* mask_file = mask->add_option("--mask", config.mask_file, "Existing mask to apply");
  for (auto* spec_option : add_mask_spec(mask, config)) mask_file->excludes(spec_option);
  add_channel(mask, config);

  auto* rec = app.add_subcommand("reconstruct", "Fill the masked pixels of one channel");
  rec->add_option("-i,--input", config.input, "Distorted image")->required();
  rec->add_option("--mask", config.mask_file, "Mask image (0 missing, 255 valid)")->required();
  rec->add_option("-o,--output", config.output, "Reconstructed image to write")->required();
  add_channel(rec, config);
  add_params(rec, config);

  auto* eval = app.add_subcommand("evaluate", "PSNR and SSIM of one channel");
  eval->add_option("clean", config.reference, "Clean image")->required();
  eval->add_option("reconstructed", config.input, "Reconstructed image")->required();
  eval->add_option("--csv", config.csv, "Append a row to this CSV file");
  add_channel(eval, config);

  auto* batch = app.add_subcommand("batch", "Mask, reconstruct and score every image in a directory");
  batch->add_option("--images,--image-dir", config.image_dir, "Directory of clean images")->required();
  batch->add_option("--output-dir", config.output_dir, "Where to write reconstructions");
  batch->add_option("--csv", config.csv, "CSV file to write (default: stdout)");
  batch->add_flag("--timing", config.timing, "Fill the seconds column");
  add_mask_spec(batch, config);
  add_channel(batch, config);
  add_params(batch, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ValidationError& e) {
    app.exit(e);
    return nocs::cli::kValidationError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nocs::cli::kInputError;
  }

  if (mask->parsed()) return nocs::cli::cmd_mask(config, std::cout, std::cerr);
  if (rec->parsed()) return nocs::cli::cmd_reconstruct(config, std::cout, std::cerr);
  if (eval->parsed()) return nocs::cli::cmd_evaluate(config, std::cout, std::cerr);
  return nocs::cli::cmd_batch(config, std::cout, std::cerr);
}
