from pathlib import Path

import numpy as np
import pytest

from volren.scripts.cli import EXIT_FAILED_CHECK, EXIT_OK, EXIT_USAGE, main
from volren.utils.ppm import read_ppm


def parse_render_ray(text: str):
    lines = text.splitlines()
    assert lines[0] == "r,g,b"
    assert lines[2] == "n,weight,alpha"
    color = [float(v) for v in lines[1].split(",")]
    rows = [[float(v) for v in line.split(",")] for line in lines[3:-1]]
    key, residual = lines[-1].split(",")
    assert key == "residual"
    return np.array(color), np.array(rows), float(residual)


def parse_validation(text: str):
    lines = text.splitlines()
    assert lines[0] == "channel,mean,stderr,expected,z"
    z = [float(line.split(",")[4]) for line in lines[1:4]]
    key, escape_fraction = lines[4].split(",")
    assert key == "escape_fraction"
    return np.array(z), float(escape_fraction)


def write_medium(tmpdir, text: str) -> str:
    path = Path(tmpdir) / "medium.csv"
    path.write_text(text)
    return str(path)


class TestRenderRay:
    def test_demo_medium(self, demo_medium_path, capsys):
        assert main(["render-ray", "--medium", demo_medium_path]) == EXIT_OK
        color, rows, residual = parse_render_ray(capsys.readouterr().out)
        assert np.allclose(color, (0.5, 0.25, 0.0), atol=1e-12, rtol=0)
        assert np.allclose(rows, [[1, 0.5, 0.5], [2, 0.25, 0.5]], atol=1e-12, rtol=0)
        assert residual == pytest.approx(0.25, abs=1e-12)

    def test_background(self, demo_medium_path, capsys):
        assert main(["render-ray", "--medium", demo_medium_path, "--background", "0,0,1"]) == EXIT_OK
        color, _, _ = parse_render_ray(capsys.readouterr().out)
        assert np.allclose(color, (0.5, 0.25, 0.25), atol=1e-12, rtol=0)

    def test_alpha_form_agrees(self, demo_medium_path, capsys):
        main(["render-ray", "--medium", demo_medium_path])
        density = parse_render_ray(capsys.readouterr().out)
        main(["render-ray", "--medium", demo_medium_path, "--form", "alpha"])
        alpha = parse_render_ray(capsys.readouterr().out)
        for a, b in zip(density, alpha):
            assert np.allclose(a, b, atol=1e-12, rtol=0)

    def test_bad_medium_files(self, tmpdir, capsys):
        assert main(["render-ray", "--medium", write_medium(tmpdir, "")]) == EXIT_USAGE
        bad_row = "t0,t1,sigma,r,g,b\n0,1,-1,1,1,1\n"
        assert main(["render-ray", "--medium", write_medium(tmpdir, bad_row)]) == EXIT_USAGE
        assert main(["render-ray", "--medium", str(Path(tmpdir) / "missing.csv")]) == EXIT_USAGE
        assert capsys.readouterr().out == ""

    def test_bad_background_is_a_usage_error(self, demo_medium_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["render-ray", "--medium", demo_medium_path, "--background", "1,2"])
        assert excinfo.value.code == EXIT_USAGE

    def test_no_action(self, capsys):
        assert main([]) == EXIT_USAGE


class TestValidate:
    def test_demo_medium_passes(self, demo_medium_path, capsys):
        assert main(["validate", "--medium", demo_medium_path, "--samples", "100000", "--seed", "0"]) == EXIT_OK
        z, escape_fraction = parse_validation(capsys.readouterr().out)
        assert np.all(np.abs(z) <= 4.0)
        assert escape_fraction == pytest.approx(0.25, abs=0.01)

    def test_vacuum(self, tmpdir, capsys):
        medium = write_medium(tmpdir, "t0,t1,sigma,r,g,b\n0,1,0,1,1,1\n")
        assert main(["validate", "--medium", medium, "--samples", "1000", "--background", "0.1,0.2,0.3"]) == EXIT_OK
        out = capsys.readouterr().out
        z, escape_fraction = parse_validation(out)
        assert np.array_equal(z, (0.0, 0.0, 0.0))
        assert escape_fraction == 1.0
        assert out.splitlines()[1] == "r,0.1,0.0,0.1,0.0"

    def test_wrong_expectation_fails(self, demo_medium_path, capsys):
        code = main(["validate", "--medium", demo_medium_path, "--samples", "20000", "--expect", "1,1,1"])
        assert code == EXIT_FAILED_CHECK
        z, _ = parse_validation(capsys.readouterr().out)
        assert np.all(np.abs(z) > 4.0)

    def test_workers(self, demo_medium_path, capsys):
        main(["validate", "--medium", demo_medium_path, "--samples", "70000", "--workers", "1"])
        single = capsys.readouterr().out
        main(["validate", "--medium", demo_medium_path, "--samples", "70000", "--workers", "3"])
        assert capsys.readouterr().out == single


class TestRenderImage:
    def test_vacuum_scene_is_black(self, tmpdir):
        out = Path(tmpdir) / "vacuum.ppm"
        args = ["render-image", "--scene", "constant", "--params", "sigma=0", "--res", "4x3", "--out", str(out)]
        assert main(args) == EXIT_OK
        data = out.read_bytes()
        assert data.startswith(b"P6\n4 3\n255\n")
        assert data[len(b"P6\n4 3\n255\n") :] == bytes(4 * 3 * 3)

    def test_background_fills_vacuum(self, tmpdir):
        out = Path(tmpdir) / "vacuum.ppm"
        args = ["render-image", "--scene", "constant", "--params", "sigma=0", "--res", "2x2", "--background", "1,0,0.5"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        assert np.array_equal(read_ppm(out), np.broadcast_to([255, 0, 128], (2, 2, 3)))

    def test_blob_center_is_brightest(self, tmpdir):
        out = Path(tmpdir) / "blob.ppm"
        assert main(["render-image", "--scene", "blob", "--res", "9x9", "--samples", "32", "--out", str(out)]) == EXIT_OK
        image = read_ppm(out).astype(int)
        assert image.shape == (9, 9, 3)
        assert image[4, 4, 0] > image[0, 0, 0]
        assert image[4, 4, 0] == image.max()

    def test_reproducible_across_runs_and_workers(self, tmpdir):
        base = ["render-image", "--scene", "blobs", "--res", "8x6", "--samples", "16", "--stratified", "--seed", "3"]
        paths = [Path(tmpdir) / f"image-{i}.ppm" for i in range(3)]
        assert main(base + ["--out", str(paths[0])]) == EXIT_OK
        assert main(base + ["--out", str(paths[1])]) == EXIT_OK
        assert main(base + ["--workers", "3", "--out", str(paths[2])]) == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()

    def test_camera_override(self, tmpdir):
        # a view box away from the blob sees nothing
        out = Path(tmpdir) / "offset.ppm"
        camera = "x_min=3,x_max=4,y_min=3,y_max=4"
        assert main(["render-image", "--scene", "blob", "--res", "3x3", "--camera", camera, "--out", str(out)]) == 0
        assert read_ppm(out).max() == 0

    def test_unknown_scene(self, tmpdir):
        out = Path(tmpdir) / "x.ppm"
        assert main(["render-image", "--scene", "teapot", "--out", str(out)]) == EXIT_USAGE
        assert not out.exists()

    def test_missing_out(self):
        assert main(["render-image", "--scene", "blob"]) == EXIT_USAGE

    def test_bad_resolution(self, tmpdir):
        with pytest.raises(SystemExit) as excinfo:
            main(["render-image", "--scene", "blob", "--res", "0x4", "--out", str(Path(tmpdir) / "x.ppm")])
        assert excinfo.value.code == EXIT_USAGE

    def test_print(self, capsys):
        assert main(["render-image", "--scene", "blob", "--params", "sigma0=3.5", "--print"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "sigma0" in out and "3.5" in out
        assert "--params" in out
        assert "z_near" in out


def read_convergence(path: Path):
    lines = path.read_text().splitlines()
    assert lines[0] == "n,err_r,err_g,err_b,err_max,seconds"
    return np.array([[float(v) for v in line.split(",")] for line in lines[1:]])


class TestConvergence:
    def test_constant_scene(self, tmpdir):
        out = Path(tmpdir) / "constant.csv"
        assert main(["convergence", "--scene", "constant", "--ns", "1,4,16", "--out", str(out)]) == EXIT_OK
        table = read_convergence(out)
        assert table[:, 0].tolist() == [1, 4, 16]
        assert np.all(table[:, 4] < 1e-12)

    def test_blob_scene(self, tmpdir, capsys):
        out = Path(tmpdir) / "blob.csv"
        args = ["convergence", "--scene", "blob", "--ns", "8,16,32,64", "--reference-steps", "100000"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        errors = read_convergence(out)[:, 4]
        assert np.all(np.diff(errors) < 0)
        assert "empirical order" in capsys.readouterr().err

    def test_no_timing_is_byte_stable(self, tmpdir):
        paths = [Path(tmpdir) / f"run-{i}.csv" for i in range(2)]
        for path in paths:
            args = ["convergence", "--scene", "step", "--ns", "4,8", "--reference-steps", "1000", "--no-timing"]
            assert main(args + ["--out", str(path)]) == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert np.all(read_convergence(paths[0])[:, 5] == 0.0)

    def test_ray_and_params_overrides(self, tmpdir):
        out = Path(tmpdir) / "overrides.csv"
        args = ["convergence", "--scene", "constant", "--params", "sigma=0.5", "--ray", "t_far=2.0", "--ns", "2,4"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        assert np.all(read_convergence(out)[:, 4] < 1e-12)

    def test_malformed_ns(self, tmpdir):
        with pytest.raises(SystemExit) as excinfo:
            main(["convergence", "--scene", "blob", "--ns", "8,x", "--out", str(Path(tmpdir) / "x.csv")])
        assert excinfo.value.code == EXIT_USAGE

    def test_unsorted_ns(self, tmpdir):
        out = Path(tmpdir) / "x.csv"
        assert main(["convergence", "--scene", "blob", "--ns", "16,8", "--out", str(out)]) == EXIT_USAGE
        assert not out.exists()

    def test_plot(self, tmpdir):
        pytest.importorskip("plotly")
        out, plot = Path(tmpdir) / "c.csv", Path(tmpdir) / "plots" / "c.html"
        args = ["convergence", "--scene", "blob", "--ns", "4,8", "--reference-steps", "1000"]
        assert main(args + ["--out", str(out), "--plot", str(plot)]) == EXIT_OK
        assert plot.exists()

    def test_print(self, capsys):
        assert main(["convergence", "--scene", "step", "--ray", "t_far=2.5", "--print"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "t_far" in out and "2.5" in out
        assert "--ray" in out
