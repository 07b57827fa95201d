#pragma once

#include <cstddef>
#include <vector>

#include "seconv/conv.hpp"
#include "seconv/image.hpp"

namespace seconv {

enum class KernelChoice { ones, inverse_distance };

Kernel make_kernel(KernelChoice choice, int size);

// A selective-convolution block: a noisy pixel is replaced by the
// kernel-weighted mean of the non-noisy pixels in its size x size window,
// provided at least eta of them are present.
struct SeConvBlockSpec {
  Kernel kernel;
  int eta = 1;

  int size() const noexcept { return kernel.size(); }

  // max(1, size - 2); equals size - 2 for every size >= 3.
  static int default_eta(int size) noexcept { return size > 3 ? size - 2 : 1; }
  static SeConvBlockSpec make(int size, KernelChoice choice = KernelChoice::ones);

  void validate() const;
};

enum class Finalize {
  leave,             // stop after the last block
  repeat_last,       // rerun the last block to a fixpoint, then mean-fill leftovers
  global_mean_fill,  // fill leftovers with the mean of the non-noisy pixels
};

struct CascadeSpec {
  std::vector<SeConvBlockSpec> blocks;
  Finalize finalize = Finalize::repeat_last;

  // Sizes 3, 5, ..., 15.
  static CascadeSpec standard(KernelChoice choice = KernelChoice::ones,
                              Finalize finalize = Finalize::repeat_last);

  // Non-empty, sizes strictly ascending, every block valid.
  void validate() const;
};

// Partially restored image together with its noisy map; noisy always equals
// noisy_map(image).
struct RestorationState {
  Image image;
  PixelMap noisy;
  std::size_t restored_count = 0;

  explicit RestorationState(Image preprocessed);
  RestorationState(Image image, PixelMap noisy, std::size_t restored_count);
};

// S = conv(x, w) / conv(m_tilde, w) where the denominator is nonzero, else 0.
// Per channel, zero padded, true convolution.
Tensor selective_conv(const Tensor& x, const PixelMap& m_tilde, const Kernel& w);

// 1 where at least eta non-noisy pixels fall inside the size x size window.
// Out-of-image positions count as noisy.
PixelMap reliability(const PixelMap& m_tilde, int size, int eta);

// x_hat = x + S (.) M (.) R, with S and R computed from the input state and
// applied to all pixels at once. Pixels with M = 0 are left untouched.
RestorationState apply_block(const RestorationState& state, const SeConvBlockSpec& block);

struct StageReport {
  int size = 0;
  std::size_t restored = 0;
  std::size_t remaining = 0;
};

struct CascadeReport {
  std::size_t initial_noisy = 0;
  std::vector<StageReport> stages;  // one entry per block, then one per repeat pass
  std::size_t repeat_passes = 0;
  std::size_t mean_filled = 0;
  double fill_value = 0.0;
};

struct CascadeResult {
  Image image;
  CascadeReport report;
};

// Preprocesses x_noisy (u8), runs the blocks in order and applies the
// finalize policy. Every nonzero pixel of the preprocessed input is returned
// bit-identical. Throws UnrestorableImage when a fill is required but no
// non-noisy pixel exists.
CascadeResult cascade_denoise_report(const Image& x_noisy, const CascadeSpec& spec);
Image cascade_denoise(const Image& x_noisy, const CascadeSpec& spec);

}  // namespace seconv
