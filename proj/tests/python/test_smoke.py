import os
import subprocess

import numpy as np
import pytest

import _lutforge as lf


def test_identity_lut_lookup():
    lut = lf.Lut3D.identity(9, lf.ValueRange.UNIT)
    out = lut.lookup(0.2, 0.5, 0.8)
    assert out == pytest.approx((0.2, 0.5, 0.8), abs=1e-12)


def test_enhance_zero_lut_is_noop():
    img = lf.synth_value_noise(16, 24, 3, 0.4, 0.2)
    zero = lf.Lut3D.identity(9, lf.ValueRange.SIGNED)
    out, params = lf.enhance(zero, img, 8)
    assert np.array_equal(out, img)
    assert len(params) == 8
    assert params[0].shape == (16, 24, 3)


def test_enhance_brightens_with_positive_lut():
    img = lf.synth_value_noise(16, 16, 4, 0.2, 0.1)
    lut = lf.Lut3D.identity(3, lf.ValueRange.SIGNED)
    entries = lut.entries()
    entries[:] = 0.3
    lut.set_entries(entries)
    out, _ = lf.enhance(lut, img, 8)
    assert out.mean() > img.mean()
    assert out.min() >= 0.0 and out.max() <= 1.0


def test_losses_and_metrics():
    img = lf.synth_value_noise(32, 32, 5, 0.5, 0.2)
    assert lf.exposure_loss(np.full((32, 32, 3), 0.65))[0] == pytest.approx(0.0, abs=1e-12)
    assert lf.structural_loss(img, img)[0] == pytest.approx(0.0, abs=1e-12)
    assert lf.diff_loss(img, img)[0] == pytest.approx(0.0, abs=1e-12)
    assert lf.psnr(img, img) == float("inf")
    assert lf.ssim(img, img) == pytest.approx(1.0, abs=1e-12)


def test_fit_llut_reduces_loss():
    dark = lf.synth_value_noise(32, 32, 6, 0.15, 0.1)
    lut, trace = lf.fit_llut(dark, iterations=20, learning_rate=0.01, lut_size=3)
    assert trace[-1]["total"] <= trace[0]["total"]
    out, _ = lf.enhance(lut, dark, 8)
    assert out.mean() > dark.mean()


def test_lut_file_roundtrip(tmp_path):
    lut = lf.Lut3D.identity(5, lf.ValueRange.SIGNED)
    path = str(tmp_path / "t.lut3")
    lut.save(path)
    back = lf.Lut3D.load(path)
    assert np.array_equal(back.entries(), lut.entries())


def test_image_file_roundtrip(tmp_path):
    img = lf.synth_value_noise(8, 8, 7)
    path = str(tmp_path / "t.png")
    lf.save_image(img, path)
    back = lf.load_image(path)
    assert np.abs(back - img).max() <= 1.0 / 510.0 + 1e-12


def test_phase_reconstruction_shape():
    img = lf.synth_value_noise(16, 16, 8, 0.5, 0.2)
    recon = lf.phase_only_reconstruction(img)
    assert recon.shape == img.shape
    assert recon.min() >= 0.0 and recon.max() <= 1.0


def test_cli_enhance(tmp_path):
    exe = os.environ.get("LUTFORGE_BIN")
    if not exe:
        pytest.skip("LUTFORGE_BIN not set")
    img = lf.synth_value_noise(16, 16, 9, 0.3, 0.2)
    src = str(tmp_path / "in.png")
    lut_path = str(tmp_path / "z.lut3")
    dst = str(tmp_path / "out.png")
    lf.save_image(img, src)
    lf.Lut3D.identity(9, lf.ValueRange.SIGNED).save(lut_path)
    subprocess.run([exe, "enhance", "--input", src, "--llut", lut_path, "--output", dst],
                   check=True, capture_output=True)
    assert np.array_equal(lf.load_image(dst), lf.load_image(src))
