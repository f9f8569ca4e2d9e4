"""Command line interface: serve the API, run visualizations headless,
train the bundled toy model."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import LucidboxError
from .modelio.checkpoint import load_checkpoint, save_checkpoint
from .modelio.config import load_config
from .modelio.labels import LabelTable
from .modelio.preprocess import preprocess_image
from .viz.registry import VisualizerRegistry


def _fail(message: str) -> SystemExit:
    click.echo(f"error: {message}", err=True)
    return SystemExit(1)


def _parse_assignment(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise _fail(f"--set expects key=value, got {text!r}")
    key, _, raw = text.partition("=")
    value: object = raw
    try:
        value = int(raw)
    except ValueError:
        try:
            value = float(raw)
        except ValueError:
            pass
    return key.strip(), value


@click.group()
@click.version_option(package_name="lucidbox")
def main():
    """Visualize what a CNN image classifier learned."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Application config file.")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="Serve a built web UI from this directory.")
def serve(config_path, ui_dir):
    """Start the HTTP service."""
    from .service.app import start_service

    try:
        config = load_config(config_path)
        handle = start_service(config, ui_dir=ui_dir)
    except LucidboxError as exc:
        raise _fail(exc.message)
    click.echo(f"listening on {handle.url}")
    try:
        handle.wait()
    except KeyboardInterrupt:
        handle.stop()


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Checkpoint to inspect.")
@click.option("--viz", "viz_name", required=True, help="Visualizer name.")
@click.option("--set", "assignments", multiple=True, metavar="KEY=VALUE",
              help="Override a visualizer setting; repeatable.")
@click.option("-k", "top_classes", type=int, default=None,
              help="Number of top classes to map.")
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.argument("images", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def visualize(model_path, viz_name, assignments, top_classes, out_dir, images):
    """Render visualization PNGs and a JSON report for the given images."""
    try:
        model, labels, preprocess = load_checkpoint(model_path)
        if labels is None:
            labels = LabelTable.numbered(model.class_count)
        registry = VisualizerRegistry(model, labels, preprocess)
        values = dict(_parse_assignment(a) for a in assignments)
        if top_classes is not None:
            values["class_selection"] = top_classes

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report_inputs = []
        normalized = None
        for image_path in images:
            data = Path(image_path).read_bytes()
            x = preprocess_image(data, preprocess)
            normalized, results = registry.run(viz_name, x, values)
            entries = []
            for r in results:
                png_name = f"{Path(image_path).stem}.{viz_name}.c{r.class_index}.png"
                (out / png_name).write_bytes(r.png)
                entries.append({"label": r.label, "probability": r.probability,
                                "png": png_name})
            report_inputs.append({"image": str(image_path), "results": entries})
        report = {"visualizer": viz_name, "settings": normalized,
                  "inputs": report_inputs}
        (out / "report.json").write_text(json.dumps(report, indent=2) + "\n",
                                         encoding="utf-8")
    except LucidboxError as exc:
        raise _fail(exc.message)
    total = sum(len(e["results"]) for e in report_inputs)
    click.echo(f"wrote {total} map(s) and report.json to {out}")


@main.command("train-toy")
@click.option("-o", "--output", "out_path", required=True,
              type=click.Path(dir_okay=False), help="Checkpoint to write.")
@click.option("--seed", type=int, default=7, show_default=True)
def train_toy(out_path, seed):
    """Train the bundled square-vs-background model and save a checkpoint."""
    from .toy import train_toy_model

    try:
        model, labels, preprocess, accuracy = train_toy_model(seed=seed)
        save_checkpoint(model, labels, preprocess, out_path)
    except LucidboxError as exc:
        raise _fail(exc.message)
    click.echo(f"train accuracy {accuracy:.3f}; wrote {out_path}")


if __name__ == "__main__":
    sys.exit(main())
