import dataclasses
import warnings
from datetime import date, datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Set

import numpy as np


class JSONSerializer:
    """
    Turns event payloads into JSON-safe values: numpy scalars and arrays, pydantic
    models, dataclasses (decode outputs, counters), paths and enums.
    """

    MAX_DEPTH = 32
    MAX_ARRAY_ITEMS = 64
    """Arrays longer than this are summarised instead of written out"""

    def __init__(self) -> None:
        self._processed_objects: Set[int] = set()

    def serialize(self, obj: Any) -> Any:
        """Main entry point for serialization."""
        self._processed_objects.clear()
        return self._serialize_object(obj, depth=0)

    def _serialize_array(self, arr: np.ndarray) -> Any:
        if arr.size <= self.MAX_ARRAY_ITEMS:
            return arr.tolist()
        return {
            "shape": list(arr.shape),
            "dtype": str(arr.dtype),
            "min": float(arr.min()),
            "max": float(arr.max()),
        }

    def _serialize_object(self, obj: Any, depth: int = 0) -> Any:
        """Recursively serialize an object using various strategies."""
        if obj is None:
            return None

        if depth > self.MAX_DEPTH:
            warnings.warn(
                f"Maximum recursion depth ({self.MAX_DEPTH}) exceeded while serializing object of type {type(obj).__name__}"
            )
            return str(obj)

        try:
            if isinstance(obj, (str, int, float, bool)):
                return obj

            if isinstance(obj, np.generic):
                return obj.item()
            if isinstance(obj, np.ndarray):
                return self._serialize_array(obj)

            if isinstance(obj, (datetime, date)):
                return obj.isoformat()
            if isinstance(obj, Path):
                return str(obj)
            if isinstance(obj, Enum):
                return obj.value

            # Prevent infinite recursion on containers
            obj_id = id(obj)
            if obj_id in self._processed_objects:
                return str(obj)
            self._processed_objects.add(obj_id)

            if hasattr(obj, "model_dump"):
                return self._serialize_object(obj.model_dump(), depth + 1)

            if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
                return self._serialize_object(
                    {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}, depth + 1
                )

            if isinstance(obj, Dict):
                return {str(key): self._serialize_object(value, depth + 1) for key, value in obj.items()}

            if isinstance(obj, Iterable) and not isinstance(obj, (str, bytes)):
                return [self._serialize_object(item, depth + 1) for item in obj]

            if callable(obj):
                return f"<callable: {getattr(obj, '__name__', type(obj).__name__)}>"

            return str(obj)

        except Exception as e:
            return f"<unserializable: {type(obj).__name__}, error: {str(e)}>"

    def __call__(self, obj: Any) -> Any:
        """Make the serializer callable."""
        return self.serialize(obj)
