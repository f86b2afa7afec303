"""
Scene and camera configurations: yaml files under configurations/, overridden from the command line with K=V dotlists.
"""
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

import volren
from volren.errors import SceneError
from volren.medium.fields import Field
from volren.medium.ray import Ray
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

CONFIGURATIONS_DIR = Path(volren.__file__).parent.parent / "configurations"
SCENES_DIR = CONFIGURATIONS_DIR / "scene"
CAMERAS_DIR = CONFIGURATIONS_DIR / "camera"
DEFAULT_CAMERA = "orthographic"


def available_scenes() -> List[str]:
    return sorted(path.stem for path in SCENES_DIR.glob("*.yaml"))


def resolve_scene_path(scene: str) -> Path:
    """
    A built-in scene name (file name without .yaml under configurations/scene) or a path to a scene yaml.
    """
    for extension in ["yaml", "yml"]:
        builtin = SCENES_DIR / f"{scene}.{extension}"
        if builtin.exists():
            return builtin
    path = Path(scene)
    if path.suffix in (".yaml", ".yml") and path.is_file():
        return path
    raise SceneError(
        f"Unknown scene '{scene}'. Available scenes are: {available_scenes()} (or a path to a scene yaml)"
    )


def _merge_overrides(
    cfg: DictConfig, overrides: Sequence[str], prefix: Optional[str], source: str
) -> Dict[str, str]:
    if len(overrides) == 0:
        return {}
    dotlist = [f"{prefix}.{item}" if prefix else item for item in overrides]
    try:
        update = OmegaConf.from_dotlist(dotlist)
        cfg.merge_with(update)
    except OmegaConfBaseException as e:
        raise SceneError(f"cannot apply {source} overrides {list(overrides)}: {e}") from e
    return {item.split("=", 1)[0].strip(): source for item in dotlist}


def load_scene_config(
    scene: str, params: Sequence[str] = (), ray: Sequence[str] = ()
) -> Tuple[DictConfig, Dict[str, str]]:
    """
    Load a scene yaml and apply field overrides (params) and ray overrides. Returns the config and a map from each
    overridden key to the flag that set it.
    """
    path = resolve_scene_path(scene)
    logger.info(f"Loading scene from {path}")
    cfg = OmegaConf.load(path)
    if "field" not in cfg:
        raise SceneError(f"scene {path} has no 'field' node")
    sources = _merge_overrides(cfg, params, "field", "--params")
    sources.update(_merge_overrides(cfg, ray, "ray", "--ray"))
    return cfg, sources


def load_camera_config(
    overrides: Sequence[str] = (), camera: str = DEFAULT_CAMERA
) -> Tuple[DictConfig, Dict[str, str]]:
    cfg = OmegaConf.create({"camera": OmegaConf.load(CAMERAS_DIR / f"{camera}.yaml")})
    sources = _merge_overrides(cfg, overrides, "camera", "--camera")
    return cfg, sources


def build_field(cfg: DictConfig) -> Field:
    """
    Build the field node: either a hydra node with a _target_, or a registered field name under `name` plus its
    parameters.
    """
    node = cfg.field
    try:
        if "_target_" in node:
            import hydra

            return hydra.utils.instantiate(node, _convert_="all")
        params = OmegaConf.to_container(node, resolve=True)
        return Field.from_name(params.pop("name", None), **params)
    except SceneError:
        raise
    except Exception as e:
        # hydra wraps constructor errors in its own exception types depending on the version
        raise SceneError(f"cannot build scene field: {e}") from e


def build_ray(cfg: DictConfig) -> Ray:
    if "ray" not in cfg:
        raise SceneError("scene has no 'ray' node")
    params = OmegaConf.to_container(cfg.ray, resolve=True)
    try:
        return Ray.towards(**params)
    except TypeError as e:
        raise SceneError(f"bad ray parameters {params}: {e}") from e
