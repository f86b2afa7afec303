from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Union

import rich
from omegaconf import DictConfig, ListConfig, OmegaConf
from rich.style import Style
from rich.text import Text
from rich.tree import Tree


@dataclass
class NodeInfo:
    key: str
    value: Any
    is_leaf: bool
    source: Optional[str] = None


class RichNodeInfo:
    def __init__(self, info: NodeInfo):
        self.info = info

    def render_value(self) -> Text:
        value = self.info.value

        if value is None:
            return Text.from_markup(
                "None",
                style=Style(
                    bold=True,
                    color="orange1",
                ),
            )

        if value is True:
            return Text.from_markup("True", style=Style(bold=True, color="green"))

        if value is False:
            return Text.from_markup("False", style=Style(bold=True, color="red"))

        if isinstance(value, (int, float)):
            return Text(str(value), style=Style(color="cyan"))

        return Text(str(value), style=Style(color="hot_pink"))

    def __rich__(self):
        key_name = self.info.key.split(".")[-1]

        parts = [
            key_name,
        ]

        if self.info.is_leaf:
            parts.append(": ")
            parts.append(self.render_value())
        elif len(self.info.value) == 0:
            v = "[]" if OmegaConf.is_list(self.info.value) else "{}"
            parts.append(": ")
            parts.append(Text(v, style=Style(bold=True, color="yellow3")))

        if self.info.source:
            parts.append(Text(f" [source: {self.info.source}]", style=Style(color="blue")))

        return Text.assemble(*parts)


class ConfigPrinter:
    """
    Renders an OmegaConf config as a rich tree. `sources` maps dotted keys to the flag that set them (e.g.
    "--params"), shown next to the value.
    """

    def __init__(
        self,
        cfg: Union[dict, DictConfig],
        fields_order: Iterable[str] = ("field", "ray", "camera"),
        sources: Optional[Dict[str, str]] = None,
        label: str = "<root>",
    ):
        self.cfg = cfg if isinstance(cfg, DictConfig) else OmegaConf.create(cfg)
        self.fields_order = fields_order
        self.sources = sources or {}
        self.label = label

    def get_rich_tree(self) -> Tree:
        tree = Tree(self.label, guide_style="dim")
        ordered_keys = [key for key in self.fields_order if key in self.cfg]
        ordered_keys += sorted(set(self.cfg.keys()).difference(self.fields_order))
        for key in ordered_keys:
            for branch in self.walk_config(key, sort=False):
                tree.add(branch)
        return tree

    @staticmethod
    def join_keys(parent: Optional[str], key: str):
        if parent is None:
            return key

        return f"{parent}.{key}"

    def node_info(self, key: str) -> NodeInfo:
        value = OmegaConf.select(self.cfg, key)
        is_leaf = not isinstance(value, (DictConfig, ListConfig))
        return NodeInfo(key=key, value=value, is_leaf=is_leaf, source=self.sources.get(key))

    def walk_config(self, key, sort: bool = True) -> List[Tree]:
        sort_fn = sorted if sort else lambda item: item
        info = self.node_info(key)
        value = info.value

        t = Tree(RichNodeInfo(info))

        if not info.is_leaf:
            if isinstance(value, DictConfig):
                iterator = sort_fn(value.keys())
            else:
                iterator = map(str, range(len(value)))

            for k in iterator:
                for child in self.walk_config(self.join_keys(key, k)):
                    t.add(child)

        return [t]


def get_rich_tree_config(
    cfg: DictConfig,
    sources: Optional[Dict[str, str]] = None,
    tree_label: str = "<root>",
):
    return ConfigPrinter(cfg, sources=sources, label=tree_label).get_rich_tree()


def print_config(
    cfg: DictConfig,
    sources: Optional[Dict[str, str]] = None,
    tree_label: str = "<root>",
):
    rich.print(get_rich_tree_config(cfg, sources, tree_label))
