def execute_command(image):
    image_patch = ImagePatch(image)
    bucket_patches = image_patch.find('bucket')
    for bucket in bucket_patches:
        if bucket.verify_property('bucket', 'orange'):
            return {'function': 'navigate_to_object', 'inputs': (bucket.horizontal_center, bucket.vertical_center), 'box': [bucket.left, bucket.lower, bucket.right, bucket.upper]}
    return {'function': 'None', 'error': 'No orange bucket found.'}
