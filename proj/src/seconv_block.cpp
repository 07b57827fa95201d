#include "seconv/seconv_block.hpp"

#include <string>

#include "seconv/errors.hpp"
#include "seconv/kernels.hpp"
#include "seconv/noise.hpp"

namespace seconv {

Kernel make_kernel(KernelChoice choice, int size) {
  return choice == KernelChoice::ones ? Kernel::ones(size) : Kernel::inverse_distance(size);
}

SeConvBlockSpec SeConvBlockSpec::make(int size, KernelChoice choice) {
  SeConvBlockSpec block{make_kernel(choice, size), default_eta(size)};
  block.validate();
  return block;
}

void SeConvBlockSpec::validate() const {
  if (size() < 3) {
    throw ValidationError("SeConv block size must be an odd integer >= 3, got " +
                          std::to_string(size()));
  }
  if (eta < 1) throw ValidationError("reliability threshold eta must be >= 1");
}

CascadeSpec CascadeSpec::standard(KernelChoice choice, Finalize finalize) {
  CascadeSpec spec;
  for (int s = 3; s <= 15; s += 2) spec.blocks.push_back(SeConvBlockSpec::make(s, choice));
  spec.finalize = finalize;
  return spec;
}

void CascadeSpec::validate() const {
  if (blocks.empty()) throw ValidationError("cascade needs at least one block");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].validate();
    if (b > 0 && blocks[b].size() <= blocks[b - 1].size()) {
      throw ValidationError("cascade block sizes must be strictly ascending");
    }
  }
}

RestorationState::RestorationState(Image preprocessed)
    : image(std::move(preprocessed)), noisy(noisy_map(image)) {}

RestorationState::RestorationState(Image image_, PixelMap noisy_, std::size_t restored_count_)
    : image(std::move(image_)), noisy(std::move(noisy_)), restored_count(restored_count_) {
  require_same_shape(image.shape(), noisy.shape(), "restoration state");
}

Tensor selective_conv(const Tensor& x, const PixelMap& m_tilde, const Kernel& w) {
  require_same_shape(x.shape(), m_tilde.shape(), "selective_conv");
  return kernels::selective_conv(x, m_tilde, w);
}

PixelMap reliability(const PixelMap& m_tilde, int size, int eta) {
  const Tensor counts = conv2d_same(to_tensor(m_tilde), Kernel::ones(size));
  PixelMap r(m_tilde.shape());
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    r.bits()[idx] = static_cast<std::uint8_t>(counts.values()[idx] >= eta);
  }
  return r;
}

RestorationState apply_block(const RestorationState& state, const SeConvBlockSpec& block) {
  block.validate();
  BlockStep step = kernels::restore_block(state.image, state.noisy, block.kernel, block.eta);
  return RestorationState(Image(std::move(step.image), state.image.scale()),
                          std::move(step.noisy), state.restored_count + step.restored);
}

namespace {

// Mean of the non-noisy values; fills every remaining noisy pixel with it.
std::size_t mean_fill(RestorationState& state, double& fill_value) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < state.image.size(); ++idx) {
    if (!state.noisy.bits()[idx]) {
      sum += state.image.values()[idx];
      ++n;
    }
  }
  if (n == 0) throw UnrestorableImage("unrestorable image: no non-noisy pixels to fill from");
  fill_value = sum / static_cast<double>(n);
  std::size_t filled = 0;
  for (std::size_t idx = 0; idx < state.image.size(); ++idx) {
    if (state.noisy.bits()[idx]) {
      state.image.values()[idx] = fill_value;
      if (fill_value != 0.0) {
        state.noisy.bits()[idx] = 0;
        ++filled;
      }
    }
  }
  state.restored_count += filled;
  return filled;
}

}  // namespace

CascadeResult cascade_denoise_report(const Image& x_noisy, const CascadeSpec& spec) {
  spec.validate();
  RestorationState state(preprocess(x_noisy));
  CascadeReport report;
  report.initial_noisy = state.noisy.count();

  auto run = [&](const SeConvBlockSpec& block) {
    const std::size_t before = state.restored_count;
    state = apply_block(state, block);
    const std::size_t restored = state.restored_count - before;
    report.stages.push_back({block.size(), restored, state.noisy.count()});
    return restored;
  };

  for (const auto& block : spec.blocks) run(block);

  if (spec.finalize == Finalize::repeat_last) {
    while (state.noisy.count() > 0 && run(spec.blocks.back()) > 0) ++report.repeat_passes;
  }
  if (spec.finalize != Finalize::leave && state.noisy.count() > 0) {
    report.mean_filled = mean_fill(state, report.fill_value);
  }
  return {std::move(state.image), std::move(report)};
}

Image cascade_denoise(const Image& x_noisy, const CascadeSpec& spec) {
  return cascade_denoise_report(x_noisy, spec).image;
}

}  // namespace seconv
