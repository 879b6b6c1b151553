#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "fontocr/errors.hpp"
#include "fontocr/evalharness.hpp"
#include "fontocr/rasterio.hpp"
#include "fontocr/recognizer.hpp"
#include "fontocr/templatestore.hpp"

namespace fontocr::cli {
namespace {

namespace fs = std::filesystem;

struct BuildArgs {
  std::string glyph_dir;
  std::string manifest;
  std::string out;
  std::string alphabet{kDefaultAlphabet};
};

struct InspectArgs {
  std::string templates;
};

struct RecognizeArgs {
  std::string image;
  std::string templates;
  std::string out = "DSP.txt";
  std::string json;
  std::string config;
  SegmentationParams params;
  RecognitionOptions options;
  bool otsu = false;
  bool no_prefilter = false;
};

struct NoiseArgs {
  std::string image;
  std::string out;
  std::string kind = "salt_pepper";
  NoiseSpec spec;
  std::string config;
};

struct RenderArgs {
  std::string templates;
  std::string out;
  std::string truth;
  std::string font = "Arial";
  CorpusSpec corpus;
  std::string config;
};

struct EvaluateArgs {
  std::string templates;
  std::string out = "table1.csv";
  std::vector<std::string> fonts{"Arial", "ComicSansMS", "TimesNewRoman"};
  std::vector<double> sizes{0.6, 0.8, 1.0};
  int count = 0;
  std::uint64_t corpus_seed = 1;
  std::string kind = "salt_pepper";
  NoiseSpec noise;
  unsigned threads = 0;
  std::string config;
};

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void add_config_option(CLI::App& cmd, std::string& path) {
  cmd.add_option("--config", path, "key=value file with option overrides (command line wins)");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Apply key=value lines to options that were not given on the command line.
// Values go through the same validators as command-line input.
void apply_config(CLI::App& cmd, const fs::path& path) {
  const auto bytes = read_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ArgumentError(where + ": expected key=value");
    const std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    CLI::Option* opt = key == "config" ? nullptr : cmd.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ArgumentError(where + ": unknown option '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void add_noise_options(CLI::App& cmd, std::string& kind, NoiseSpec& spec) {
  cmd.add_option("--kind", kind, "Noise type")
      ->check(CLI::IsMember({"salt_pepper", "gaussian", "speckle"}));
  cmd.add_option("--density", spec.density, "Salt & pepper corruption probability")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--sigma", spec.sigma, "Gaussian std-dev on the 0..255 scale")->check(CLI::NonNegativeNumber);
  cmd.add_option("--variance", spec.variance, "Speckle multiplicative variance")->check(CLI::NonNegativeNumber);
  cmd.add_option("--seed", spec.seed, "Noise RNG seed");
}

int do_build(const BuildArgs& a, std::ostream& out) {
  const auto set = build_template_set(a.glyph_dir, a.manifest, {kAllFonts[0], kAllFonts[1], kAllFonts[2]}, a.alphabet);
  save_template_set(set, a.out);
  out << set.size() << " glyphs\n";
  return kOk;
}

int do_inspect(const InspectArgs& a, std::ostream& out) {
  const auto set = load_template_set(a.templates);
  out << "count " << set.size() << "\nfonts";
  for (Font f : set.fonts()) out << " " << font_id(f);
  out << "\nalphabet " << set.alphabet() << "\n";
  return kOk;
}

int do_recognize(RecognizeArgs a, std::ostream& out) {
  a.options.use_otsu = a.otsu;
  a.options.prefilter = !a.no_prefilter;
  a.params.validate();
  a.options.validate();

  const auto set = load_template_set(a.templates);
  const auto image = load_image(a.image);
  const auto result = recognize_document(image, set, a.params, a.options);

  write_report(result, a.out);
  if (!a.json.empty()) {
    try {
      write_structured(result, a.json);
    } catch (...) {
      std::error_code ec;
      fs::remove(a.out, ec);
      throw;
    }
  }
  out << (result.font ? font_display_name(*result.font) : "none") << "\n";
  return kOk;
}

int do_noise(NoiseArgs a) {
  a.spec.kind = *parse_noise_kind(a.kind);
  a.spec.validate();
  const auto gray = to_grayscale(load_image(a.image));
  save_pgm(add_noise(gray, a.spec), a.out);
  return kOk;
}

int do_render(RenderArgs a, std::ostream& out) {
  a.corpus.font = *parse_font(a.font);
  a.corpus.validate();
  const auto set = load_template_set(a.templates);
  const auto corpus = render_corpus(a.corpus, set, PageGeometry{});

  std::vector<std::pair<fs::path, std::vector<std::uint8_t>>> files;
  const fs::path base(a.out);
  for (std::size_t p = 0; p < corpus.pages.size(); ++p) {
    fs::path path = base;
    if (corpus.pages.size() > 1) {
      path.replace_filename(base.stem().string() + "_" + std::to_string(p + 1) + base.extension().string());
    }
    files.emplace_back(path, encode_pgm(corpus.pages[p]));
  }
  for (const auto& [path, bytes] : files) write_file(path, bytes);
  if (!a.truth.empty()) {
    std::string text;
    for (const auto& page : corpus.page_lines) {
      for (const auto& line : page) text += line + "\n";
    }
    write_text(a.truth, text);
  }
  out << corpus.pages.size() << " page(s), " << a.corpus.char_count << " glyphs\n";
  return kOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out) {
  GridSpec grid;
  grid.fonts.clear();
  for (const auto& f : a.fonts) grid.fonts.push_back(*parse_font(f));
  grid.size_scales = a.sizes;
  if (a.count > 0) {
    grid.counts.clear();
    grid.default_count = a.count;
  }
  grid.corpus_seed = a.corpus_seed;
  grid.noise = a.noise;
  grid.noise.kind = *parse_noise_kind(a.kind);
  grid.threads = a.threads;
  grid.validate();

  const auto set = load_template_set(a.templates);
  const auto rows = run_grid(grid, set);
  const auto csv = format_csv(rows);
  write_text(a.out, csv);
  out << csv;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Template-matching OCR with font identification"};
  app.name(args.empty() ? "fontocr" : fs::path(args.front()).filename().string());
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-templates", "Pack glyph bitmaps into a template set file");
  build_cmd->add_option("--glyph-dir", build.glyph_dir, "Directory that manifest paths are relative to")->required();
  build_cmd->add_option("--manifest", build.manifest, "Tab-separated font/label/path manifest")->required();
  build_cmd->add_option("--out", build.out, "Output template set file")->required();
  build_cmd->add_option("--alphabet", build.alphabet, "Glyph labels per font, in canonical order");

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print the header of a template set file");
  inspect_cmd->add_option("--templates", inspect.templates, "Template set file")->required();

  RecognizeArgs rec;
  auto* rec_cmd = app.add_subcommand("recognize", "Recover text and font from a page image");
  add_config_option(*rec_cmd, rec.config);
  rec_cmd->add_option("--image", rec.image, "Input image (PBM, PGM, PPM or PNG)")->required();
  rec_cmd->add_option("--templates", rec.templates, "Template set file")->required();
  rec_cmd->add_option("--out", rec.out, "Text report path");
  rec_cmd->add_option("--json", rec.json, "Optional structured report path");
  rec_cmd->add_option("--threshold", rec.options.threshold, "Correlation rejection threshold")
      ->check(CLI::Range(-1.0, 1.0));
  rec_cmd->add_option("--binarize-threshold", rec.options.binarize_threshold, "Binarization threshold")
      ->check(CLI::Range(0.0, 1.0));
  rec_cmd->add_flag("--otsu", rec.otsu, "Pick the binarization threshold with Otsu's method");
  rec_cmd->add_flag("--no-prefilter", rec.no_prefilter, "Skip the 3x3 median prefilter");
  rec_cmd->add_option("--min-area", rec.params.min_component_area, "Smallest ink component kept")
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--line-gap", rec.params.line_gap, "Blank rows that end a line")->check(CLI::PositiveNumber);
  rec_cmd->add_option("--char-gap", rec.params.char_gap, "Blank columns that end a character")
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--space-gap", rec.params.space_gap, "Blank columns that mark a word space")
      ->check(CLI::PositiveNumber);

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Inject seeded noise into an image (writes PGM)");
  add_config_option(*noise_cmd, noise.config);
  noise_cmd->add_option("--image", noise.image, "Input image")->required();
  noise_cmd->add_option("--out", noise.out, "Output PGM path")->required();
  add_noise_options(*noise_cmd, noise.kind, noise.spec);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a synthetic page from template glyphs");
  add_config_option(*render_cmd, render.config);
  render_cmd->add_option("--templates", render.templates, "Template set file")->required();
  render_cmd->add_option("--out", render.out, "Output PGM path (numbered when several pages)")->required();
  render_cmd->add_option("--truth", render.truth, "Optional ground-truth text path");
  render_cmd->add_option("--font", render.font, "Font to render")
      ->check(CLI::IsMember({"Arial", "ComicSansMS", "TimesNewRoman"}));
  render_cmd->add_option("--size-scale", render.corpus.size_scale, "Glyph scale (0.6/0.8/1.0 for 6/8/10 pt)")
      ->check(CLI::Range(0.01, 2.0));
  render_cmd->add_option("--count", render.corpus.char_count, "Number of glyphs")->check(CLI::PositiveNumber);
  render_cmd->add_option("--seed", render.corpus.seed, "Glyph sequence RNG seed");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run the noise evaluation grid and write a CSV table");
  add_config_option(*eval_cmd, eval.config);
  eval_cmd->add_option("--templates", eval.templates, "Template set file")->required();
  eval_cmd->add_option("--out", eval.out, "CSV output path");
  eval_cmd->add_option("--fonts", eval.fonts, "Fonts to evaluate")
      ->delimiter(',')
      ->check(CLI::IsMember({"Arial", "ComicSansMS", "TimesNewRoman"}));
  eval_cmd->add_option("--sizes", eval.sizes, "Size scales to evaluate")->delimiter(',')->check(CLI::Range(0.01, 2.0));
  eval_cmd->add_option("--count", eval.count,
                       "Glyphs per cell; 0 keeps the per-size totals 3250/3100/3300 for 6/8/10 pt")
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--corpus-seed", eval.corpus_seed, "Base seed for glyph sequences");
  eval_cmd->add_option("--threads", eval.threads, "Worker threads, 0 for all cores");
  add_noise_options(*eval_cmd, eval.kind, eval.noise);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    try {
      for (auto [cmd, config] : {std::pair{rec_cmd, &rec.config}, std::pair{noise_cmd, &noise.config},
                                 std::pair{render_cmd, &render.config}, std::pair{eval_cmd, &eval.config}}) {
        if (cmd->parsed() && !config->empty()) apply_config(*cmd, *config);
      }
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
    if (build_cmd->parsed()) return do_build(build, out);
    if (inspect_cmd->parsed()) return do_inspect(inspect, out);
    if (rec_cmd->parsed()) return do_recognize(rec, out);
    if (noise_cmd->parsed()) return do_noise(noise);
    if (render_cmd->parsed()) return do_render(render, out);
    if (eval_cmd->parsed()) return do_evaluate(eval, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace fontocr::cli
