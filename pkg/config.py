"""
配置管理模块
负责求解器、校验器和基准测试配置的加载、保存和管理
"""

import copy
import json
import logging
import os
from typing import Any, Dict

log = logging.getLogger(__name__)

# 应用程序配置
APP_NAME = "wsnm"
APP_VERSION = "1.0.0"
CONFIG_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "app_config.json")

# 穷举验证的规模上限（男女两侧人数）
DEFAULT_ORACLE_MAX_SIDE = 10

DEFAULT_CONFIG: Dict[str, Any] = {
    "oracle_max_side": DEFAULT_ORACLE_MAX_SIDE,
    "debug_checks": False,
    "record_trace": True,
    "log_level": "WARNING",
    "bench": {
        "min": 100,
        "max": 1600,
        "factor": 2,
        "reps": 5,
        "seed": 0,
        "density": 1.0,
        "jobs": 1,
    },
    "recent_files": [],
}


class AppConfig:
    """应用程序配置管理类"""

    def __init__(self, config_file: str = CONFIG_FILE):
        """初始化配置管理"""
        self.config_file = config_file
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """加载配置文件，缺失的键使用默认值补齐"""
        default_config = copy.deepcopy(DEFAULT_CONFIG)

        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded_config = json.load(f)
                # 合并配置，确保所有默认值都存在
                for key, value in default_config.items():
                    if key not in loaded_config:
                        loaded_config[key] = value
                    elif isinstance(value, dict) and isinstance(loaded_config[key], dict):
                        for sub_key, sub_value in value.items():
                            loaded_config[key].setdefault(sub_key, sub_value)
                return loaded_config

            return default_config
        except (OSError, ValueError) as e:
            log.warning("加载配置文件出错: %s, 使用默认配置", e)
            return default_config

    def save_config(self) -> bool:
        """保存配置到文件"""
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, ensure_ascii=False, indent=4)
            return True
        except OSError as e:
            log.error("保存配置文件出错: %s", e)
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值"""
        return self.config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """设置配置值"""
        self.config[key] = value

    def bench_default(self, key: str) -> Any:
        """获取基准测试的默认参数"""
        return self.get("bench", {}).get(key, DEFAULT_CONFIG["bench"][key])

    def add_recent_file(self, file_path: str) -> None:
        """添加最近使用的实例文件"""
        recent_files = list(self.get("recent_files", []))
        # 如果文件已存在，先移除它
        if file_path in recent_files:
            recent_files.remove(file_path)
        recent_files.insert(0, file_path)
        # 保留最近的10个文件
        self.set("recent_files", recent_files[:10])
