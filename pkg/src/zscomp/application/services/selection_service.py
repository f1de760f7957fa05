"""
应用层 - 组合选择应用服务
"""
import logging
import os
from typing import Dict, List, Optional

from ...domain.inference.scores import Method
from ...infrastructure.exporters.csv_exporter import selection_file_name, write_selection_csv
from ...infrastructure.exporters.json_report import write_json_report
from .classification_service import ClassificationAppService
from .experiment_context import ExperimentContext

logger = logging.getLogger(__name__)

SELECTION_DIR = "selections"
MANIFEST_FILE = "manifest.json"


class SelectionAppService:
    """select命令：为每个动作导出组合集合CSV及清单"""

    def __init__(self, context: ExperimentContext,
                 classification: Optional[ClassificationAppService] = None):
        self.context = context
        self.config = context.config
        self.classification = classification or ClassificationAppService(context)

    def run(self) -> Dict[str, object]:
        method = self.config.resolved_method
        if not method.uses_compositions:
            method = Method.COMPOSITIONS
        selection = self.config.selection_config(method=method)
        sets = self.classification.composition_sets(method)

        target = os.path.join(self.config.output_dir, SELECTION_DIR)
        os.makedirs(target, exist_ok=True)
        ctx = self.context
        entries: List[Dict[str, object]] = []
        for comp_set in sets:
            name = selection_file_name(comp_set.action_id)
            write_selection_csv(os.path.join(target, name), comp_set,
                                ctx.action_vocab, ctx.object_vocab, ctx.scene_vocab)
            entries.append({
                'action_id': comp_set.action_id,
                'action_label': ctx.action_vocab.label_of(comp_set.action_id),
                'file': f"{SELECTION_DIR}/{name}",
                'size': len(comp_set),
            })

        manifest = {
            'command': 'select',
            'selection': selection.to_dict(),
            'space_shape': list(ctx.space.shape),
            'num_actions': len(entries),
            'files': entries,
            'config': self.config.to_dict(),
        }
        write_json_report(os.path.join(self.config.output_dir, MANIFEST_FILE), manifest)
        logger.info(f"✅ 已导出 {len(entries)} 个动作的组合集合到 {target}")
        return manifest
