// Wire types for the lucidbox HTTP+JSON API.

export interface SettingJson {
  key: string;
  type: 'int' | 'float' | 'enum';
  default: number | string;
  min: number | null;
  max: number | null;
  values: string[] | null;
  label: string;
}

export interface VisualizerJson {
  name: string;
  description: string;
  settings: SettingJson[];
}

export interface HealthInfo {
  model: string;
  input_shape: number[];
  class_count: number;
}

export interface JobResultEntry {
  label: string;
  probability: number;
  png_id: string;
}

export interface JobInput {
  image_id: string;
  results: JobResultEntry[];
}

export interface JobResult {
  job_id: string;
  visualizer: string;
  settings: Record<string, number | string>;
  inputs: JobInput[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  key?: string;
}

export interface UploadedImage {
  imageId: string;
  name: string;
  thumbUrl: string | null;
}
